"""Covariance constraints on cloner amplitudes.

A cloner is covariant in two bases when its joint state is the same whether
the Bell states are built on one basis or the other.  Writing the Bell
states of the second basis in terms of the first gives an overlap matrix V;
covariance holds iff the diagonal amplitude matrix commutes with V, i.e. the
amplitudes are constant on the connected components of V's nonzero pattern.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bases import OrthonormalBasis, computational_basis
from .bell import BellFamily, bell_family
from .cloner import check_amplitudes, pair_product
from .qlinalg import ATOL

ZERO_TOL = 1e-9

Index = tuple[int, int]


def overlap_matrix(fam1: BellFamily, fam2: BellFamily) -> np.ndarray:
    """V[(i,j),(k,l)] = <fam1(i,j)|fam2(k,l)> with row-major flattened labels."""
    if fam1.dim != fam2.dim:
        raise ValueError("Bell families have different dimensions")
    return fam1.matrix().conj().T @ fam2.matrix()


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values(), key=lambda g: g[0])


def _default_labels(k: int) -> tuple[str, ...]:
    letters = string.ascii_lowercase
    if k <= len(letters):
        return tuple(letters[:k])
    return tuple(f"p{i}" for i in range(k))


@dataclass(frozen=True)
class AmplitudePattern:
    """Partition of the N^2 amplitude labels into classes sharing one value."""

    dim: int
    classes: tuple[tuple[Index, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        classes = tuple(tuple(sorted((int(m), int(n)) for m, n in c)) for c in self.classes)
        classes = tuple(sorted(classes, key=lambda c: c[0]))
        seen = [idx for c in classes for idx in c]
        expected = {(m, n) for m in range(self.dim) for n in range(self.dim)}
        if len(seen) != len(set(seen)) or set(seen) != expected:
            raise ValueError("pattern classes must be disjoint and cover every (m, n)")
        object.__setattr__(self, "classes", classes)
        labels = tuple(self.labels) or _default_labels(len(classes))
        if len(labels) != len(classes):
            raise ValueError("need one label per class")
        object.__setattr__(self, "labels", labels)

    @property
    def n_params(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes])

    def indicators(self) -> np.ndarray:
        """Array of shape (k, N, N); slice c is 1 on class c."""
        E = np.zeros((self.n_params, self.dim, self.dim))
        for c, members in enumerate(self.classes):
            for m, n in members:
                E[c, m, n] = 1.0
        return E

    def matrix(self, values: Sequence[complex] | dict[str, complex]) -> np.ndarray:
        if isinstance(values, dict):
            values = [values[name] for name in self.labels]
        values = np.asarray(values)
        if values.shape != (self.n_params,):
            raise ValueError(f"expected {self.n_params} values, got {values.shape}")
        return np.tensordot(values, self.indicators(), axes=1)

    def respects(self, a, atol: float = ATOL) -> bool:
        a = np.asarray(a)
        return all(np.allclose(a[c[0]], [a[idx] for idx in c], rtol=0, atol=atol)
                   for c in self.classes)

    def is_refinement_of(self, other: "AmplitudePattern") -> bool:
        """Every class of ``self`` lies inside a class of ``other``."""
        where = {idx: i for i, c in enumerate(other.classes) for idx in c}
        return all(len({where[idx] for idx in c}) == 1 for c in self.classes)

    def merge(self, groups: Iterable[Iterable[str]], labels: Sequence[str] = ()) -> "AmplitudePattern":
        """Coarser pattern where the named classes in each group share one value."""
        index = {name: i for i, name in enumerate(self.labels)}
        uf = UnionFind(self.n_params)
        for g in groups:
            g = [index[name] for name in g]
            for other in g[1:]:
                uf.union(g[0], other)
        merged = [tuple(idx for c in grp for idx in self.classes[c]) for grp in uf.groups()]
        return AmplitudePattern(self.dim, tuple(merged), tuple(labels))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "classes": [[list(idx) for idx in c] for c in self.classes],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, doc: dict | str) -> "AmplitudePattern":
        if isinstance(doc, str):
            doc = json.loads(doc)
        classes = tuple(tuple(tuple(idx) for idx in c) for c in doc["classes"])
        return cls(int(doc["dim"]), classes, tuple(doc.get("labels", ())))


def equivalence_classes(V: np.ndarray, tol: float = ZERO_TOL) -> AmplitudePattern:
    """Transitive closure of {(i,j) ~ (k,l) : |V[(i,j),(k,l)]| > tol}."""
    n = V.shape[0]
    N = int(round(np.sqrt(n)))
    if V.shape != (n, n) or N * N != n:
        raise ValueError(f"overlap matrix must be N^2 x N^2, got {V.shape}")
    uf = UnionFind(n)
    rows, cols = np.nonzero(np.abs(V) > tol)
    for r, c in zip(rows, cols):
        uf.union(int(r), int(c))
    classes = tuple(tuple(divmod(x, N) for x in g) for g in uf.groups())
    return AmplitudePattern(N, classes)


def covariant_pattern(basis1: OrthonormalBasis, basis2: OrthonormalBasis,
                      rule: str = "fourier", tol: float = ZERO_TOL) -> AmplitudePattern:
    """Most general amplitude pattern giving a cloner covariant in both bases."""
    V = overlap_matrix(bell_family(rule, basis1), bell_family(rule, basis2))
    return equivalence_classes(V, tol)


def covariance_states(a, basis2: OrthonormalBasis, rule: str = "fourier",
                      basis1: OrthonormalBasis | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The two sides of the covariance condition, each a four-register state."""
    a = check_amplitudes(a)
    if basis1 is None:
        basis1 = computational_basis(a.shape[0])
    return (pair_product(bell_family(rule, basis1), a),
            pair_product(bell_family(rule, basis2), a))


def verify_covariance(a, basis2: OrthonormalBasis, rule: str = "fourier",
                      basis1: OrthonormalBasis | None = None, atol: float = ATOL) -> bool:
    lhs, rhs = covariance_states(a, basis2, rule, basis1)
    return bool(np.allclose(lhs, rhs, rtol=0, atol=atol))


def xyz_pattern(N: int = 4) -> AmplitudePattern:
    """x at (0,0), y on the rest of row and column 0, z elsewhere."""
    x = ((0, 0),)
    y = tuple((0, k) for k in range(1, N)) + tuple((k, 0) for k in range(1, N))
    z = tuple((m, n) for m in range(1, N) for n in range(1, N))
    return AmplitudePattern(N, (x, y, z), ("x", "y", "z"))


def universal_pattern(N: int) -> AmplitudePattern:
    rest = tuple((m, n) for m in range(N) for n in range(N) if (m, n) != (0, 0))
    return AmplitudePattern(N, (((0, 0),), rest), ("a", "b"))


def isotropic_abc_pattern() -> AmplitudePattern:
    """Rows (a,b,c,b), (b,c,b,c), (c,b,c,b), (b,c,b,c)."""
    layout = ["abcb", "bcbc", "cbcb", "bcbc"]
    groups: dict[str, list[Index]] = {}
    for m, row in enumerate(layout):
        for n, ch in enumerate(row):
            groups.setdefault(ch, []).append((m, n))
    return AmplitudePattern(4, tuple(tuple(groups[k]) for k in "abc"), ("a", "b", "c"))
