"""Orthonormal bases (computational, Fourier, Hadamard, interferometric) and
the index groups that label them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qlinalg import ATOL, as_op

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class OrthonormalBasis:
    """Columns of ``matrix`` are the basis kets in the ambient coordinates."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = as_op(self.matrix)
        object.__setattr__(self, "matrix", m)
        gram = m.conj().T @ m
        if not np.allclose(gram, np.eye(m.shape[0]), rtol=0, atol=ATOL):
            raise ValueError(f"basis {self.label!r} is not orthonormal")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def vectors(self) -> list[np.ndarray]:
        return [self.matrix[:, j] for j in range(self.dim)]

    def __getitem__(self, j: int) -> np.ndarray:
        return self.matrix[:, j]

    def conj(self) -> "OrthonormalBasis":
        return OrthonormalBasis(self.matrix.conj(), self.label + "*")


def overlap(b1: OrthonormalBasis, b2: OrthonormalBasis) -> np.ndarray:
    """Matrix of inner products ``<b1_i|b2_j>``."""
    if b1.dim != b2.dim:
        raise ValueError("bases have different dimensions")
    return b1.matrix.conj().T @ b2.matrix


def are_unbiased(b1: OrthonormalBasis, b2: OrthonormalBasis, atol: float = ATOL) -> bool:
    o = overlap(b1, b2)
    return bool(np.allclose(np.abs(o) ** 2, 1.0 / b1.dim, rtol=0, atol=atol))


def computational_basis(N: int) -> OrthonormalBasis:
    if N < 1:
        raise ValueError("dimension must be positive")
    return OrthonormalBasis(np.eye(N), "computational")


def fourier_basis(N: int) -> OrthonormalBasis:
    """Entry (k, l) is exp(2 pi i k l / N) / sqrt(N)."""
    if N < 2:
        raise ValueError("Fourier basis needs N >= 2")
    k = np.arange(N)
    return OrthonormalBasis(np.exp(2j * np.pi * np.outer(k, k) / N) / np.sqrt(N), "fourier")


HADAMARD_SIGNS = np.array([
    [1, 1, 1, 1],
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
])


def hadamard_matrix() -> np.ndarray:
    """The real symmetric 4x4 matrix H with entries +-1/2 (self-inverse)."""
    return HADAMARD_SIGNS / 2.0


def hadamard_basis() -> OrthonormalBasis:
    # column j is |j'> in computational coordinates, since <i|j'> = H_ij
    return OrthonormalBasis(hadamard_matrix(), "hadamard")


def interferometric_bases() -> tuple[OrthonormalBasis, OrthonormalBasis]:
    """The two pulse-array bases in (phi11, phi12, phi21, phi22) coordinates."""
    s = SQRT_HALF
    unprimed = np.array([
        [s, s, 0, 0],
        [s, -s, 0, 0],
        [0, 0, s, s],
        [0, 0, s, -s],
    ]).T
    primed = np.array([
        [s, 0, s, 0],
        [s, 0, -s, 0],
        [0, s, 0, s],
        [0, s, 0, -s],
    ]).T
    return OrthonormalBasis(unprimed, "pulse"), OrthonormalBasis(primed, "pulse'")


@dataclass(frozen=True)
class IndexGroup:
    """An abelian group on {0..dim-1} given by its addition table."""

    table: np.ndarray
    label: str = ""
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.array(self.table, dtype=int)
        n = t.shape[0]
        if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
            raise ValueError("group table must be square with entries in range")
        if not np.array_equal(t[0], np.arange(n)) or not np.array_equal(t, t.T):
            raise ValueError("group table must be commutative with identity 0")
        for row in t:
            if len(set(row)) != n:
                raise ValueError("group table rows must be permutations")
        idx = np.arange(n)
        if not np.array_equal(t[t[:, :, None], idx[None, None, :]],
                              t[idx[:, None, None], t[None, :, :]]):
            raise ValueError("group table is not associative")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        inv = np.array([int(np.flatnonzero(t[i] == 0)[0]) for i in range(n)])
        inv.setflags(write=False)
        object.__setattr__(self, "_inverse", inv)

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def add(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def neg(self, i: int) -> int:
        return int(self._inverse[i])


def cyclic_group(N: int) -> IndexGroup:
    k = np.arange(N)
    return IndexGroup((k[:, None] + k[None, :]) % N, f"Z{N}")


def klein_group() -> IndexGroup:
    # bitwise xor on two bits is exactly the Hadamard sum
    k = np.arange(4)
    return IndexGroup(k[:, None] ^ k[None, :], "Z2xZ2")


def hadamard_sum(i: int, j: int) -> int:
    """i (+) j: addition mod 4 except 1+1 = 3+3 = 0 and 1+3 = 3+1 = 2."""
    if not (0 <= i < 4 and 0 <= j < 4):
        raise ValueError(f"Hadamard sum is defined on 0..3, got ({i}, {j})")
    if i in (1, 3) and j in (1, 3):
        return 0 if i == j else 2
    return (i + j) % 4


def row_group_check(basis: OrthonormalBasis, group: IndexGroup, atol: float = ATOL) -> bool:
    """Check sqrtN*M[i,j] * sqrtN*M[i,k] == sqrtN*M[i, j o k] for all i, j, k."""
    if basis.dim != group.dim:
        raise ValueError("basis and group dimensions differ")
    s = np.sqrt(basis.dim) * basis.matrix
    lhs = s[:, :, None] * s[:, None, :]
    rhs = s[:, group.table]
    return bool(np.allclose(lhs, rhs, rtol=0, atol=atol))
