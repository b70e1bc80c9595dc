"""Bell-state families, error operators and the permutation operators that
leave them invariant.

Two construction rules are supported.  The ``fourier`` rule labels states by a
shift ``m`` in Z_N and a phase index ``n`` with characters exp(2 pi i k n / N).
The ``hadamard`` rule (N = 4 only) replaces Z_4 by the Klein group, whose sum
is the Hadamard sum, and the characters by the +-1 entries of 2H.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bases import (
    IndexGroup,
    OrthonormalBasis,
    computational_basis,
    cyclic_group,
    hadamard_basis,
    hadamard_matrix,
    klein_group,
)
from .qlinalg import ATOL, is_unitary, reduced_density

RULES = ("fourier", "hadamard")


def check_rule(rule: str, N: int) -> None:
    if rule not in RULES:
        raise ValueError(f"unknown Bell rule {rule!r}; expected one of {RULES}")
    if rule == "hadamard" and N != 4:
        raise ValueError("the hadamard rule is only defined for N = 4")


def _wrap(i: int, N: int) -> int:
    # negative labels such as -n are taken mod N; labels >= N are errors
    return i + N if -N <= i < 0 else i


def _check_index(i: int, N: int, name: str) -> None:
    if not 0 <= i < N:
        raise ValueError(f"index {name}={i} out of range for N={N}")


@lru_cache(maxsize=None)
def characters(rule: str, N: int) -> np.ndarray:
    """chi[k, n]: exp(2 pi i k n / N) for fourier, 2 H_{k,n} for hadamard."""
    check_rule(rule, N)
    if rule == "fourier":
        k = np.arange(N)
        chi = np.exp(2j * np.pi * np.outer(k, k) / N)
    else:
        chi = (2 * hadamard_matrix()).astype(complex)
    chi.setflags(write=False)
    return chi


def index_group(rule: str, N: int) -> IndexGroup:
    check_rule(rule, N)
    return cyclic_group(N) if rule == "fourier" else klein_group()


def _bell(basis: OrthonormalBasis, rule: str, m: int, n: int) -> np.ndarray:
    N = basis.dim
    check_rule(rule, N)
    _check_index(m, N, "m")
    _check_index(n, N, "n")
    chi = characters(rule, N)
    g = index_group(rule, N).table
    out = np.zeros(N * N, dtype=complex)
    for k in range(N):
        out += chi[k, n] * np.kron(basis.matrix[:, k].conj(), basis.matrix[:, g[k, m]])
    return out / np.sqrt(N)


def fourier_bell(N: int, m: int, n: int) -> np.ndarray:
    """N^(-1/2) sum_k exp(2 pi i k n / N) |k>|k+m>."""
    return _bell(computational_basis(N), "fourier", _wrap(m, N), _wrap(n, N))


def generalized_bell(basis: OrthonormalBasis, m: int, n: int, rule: str = "fourier") -> np.ndarray:
    """Bell state built on ``basis``: N^(-1/2) sum_k chi[k,n] |psi*_k>|psi_{k o m}>.

    The first register carries the conjugate basis, so the result equals
    (I x U~_{m,n}) applied to the computational |B_00>.
    """
    return _bell(basis, rule, _wrap(m, basis.dim), _wrap(n, basis.dim))


def hadamard_bell(m: int, n: int) -> np.ndarray:
    """sum_k H_{k,n} |k>|k (+) m>, real with entries in {0, +-1/2}."""
    return _bell(computational_basis(4), "hadamard", m, n)


@dataclass(frozen=True)
class BellFamily:
    """N^2 Bell states indexed by (m, n); ``states[m, n]`` is a ket of length N^2."""

    rule: str
    basis: OrthonormalBasis
    states: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.dim

    def __getitem__(self, mn: tuple[int, int]) -> np.ndarray:
        m, n = mn
        return self.states[m % self.dim, n % self.dim]

    def matrix(self) -> np.ndarray:
        """Columns are the states in row-major (m, n) order."""
        N = self.dim
        return self.states.reshape(N * N, N * N).T

    def is_orthonormal(self, atol: float = ATOL) -> bool:
        m = self.matrix()
        return bool(np.allclose(m.conj().T @ m, np.eye(m.shape[1]), rtol=0, atol=atol))

    def is_maximally_entangled(self, atol: float = ATOL) -> bool:
        N = self.dim
        target = np.eye(N) / N
        for m in range(N):
            for n in range(N):
                for keep in (0, 1):
                    r = reduced_density(self.states[m, n], keep, (N, N))
                    if not np.allclose(r, target, rtol=0, atol=atol):
                        return False
        return True


def bell_family(rule: str, basis: OrthonormalBasis | None = None, N: int | None = None) -> BellFamily:
    """Family for ``rule`` built on ``basis`` (computational if omitted)."""
    if basis is None:
        if N is None:
            N = 4
        basis = computational_basis(N)
    N = basis.dim
    check_rule(rule, N)
    states = np.empty((N, N, N * N), dtype=complex)
    for m in range(N):
        for n in range(N):
            states[m, n] = _bell(basis, rule, m, n)
    states.setflags(write=False)
    return BellFamily(rule, basis, states)


def fourier_family(N: int) -> BellFamily:
    return bell_family("fourier", computational_basis(N))


def hadamard_family() -> BellFamily:
    return bell_family("hadamard", computational_basis(4))


def error_operator(rule: str, N: int, m: int, n: int) -> np.ndarray:
    """U_{m,n} = sum_k chi[k,n] |k o m><k|; (I x U)|B_00> = |B_{m,n}>."""
    check_rule(rule, N)
    m, n = m % N, n % N
    chi = characters(rule, N)
    g = index_group(rule, N).table
    U = np.zeros((N, N), dtype=complex)
    for k in range(N):
        U[g[k, m], k] = chi[k, n]
    return U


def generalized_error_operator(basis: OrthonormalBasis, m: int, n: int,
                               rule: str = "fourier") -> np.ndarray:
    """sum_k chi[k,n] |psi_{k o m}><psi_k| for the kets of ``basis``."""
    A = basis.matrix
    return A @ error_operator(rule, basis.dim, m, n) @ A.conj().T


@dataclass(frozen=True)
class ErrorOperatorSet:
    rule: str
    ops: np.ndarray  # shape (N, N, N, N): ops[m, n] is U_{m,n}

    @property
    def dim(self) -> int:
        return self.ops.shape[0]

    def __getitem__(self, mn: tuple[int, int]) -> np.ndarray:
        return self.ops[mn[0] % self.dim, mn[1] % self.dim]


def error_operators(rule: str, N: int) -> ErrorOperatorSet:
    ops = np.array([[error_operator(rule, N, m, n) for n in range(N)] for m in range(N)])
    for row in ops:
        for U in row:
            if not is_unitary(U):
                raise ArithmeticError("error operator failed unitarity")
    ops.setflags(write=False)
    return ErrorOperatorSet(rule, ops)


def cyclic_perm(N: int) -> np.ndarray:
    """C|l> = |l+1 mod N>."""
    if N < 2:
        raise ValueError("cyclic permutation needs N >= 2")
    return np.roll(np.eye(N), 1, axis=0).astype(complex)


def pair_perm(i: int) -> np.ndarray:
    """P_i|k> = |k (+) i>: P_1 swaps 0<->1 and 2<->3, P_2 swaps 0<->2 and 1<->3, ..."""
    if not 0 <= i < 4:
        raise ValueError(f"pair permutation index must be in 0..3, got {i}")
    P = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        P[k ^ i, k] = 1.0
    return P


def primed_pair_perm(i: int) -> np.ndarray:
    """The same permutation acting on the Hadamard (primed) basis labels."""
    H = hadamard_matrix()
    return H @ pair_perm(i) @ H


def eigenspace_projector(n: int, N: int, atol: float = ATOL) -> np.ndarray:
    """Projector onto the eigenvalue exp(-2 pi i n / N) eigenspace of C x C.

    Built both as sum_k |B_{k,n}><B_{k,n}| and as (1/N) sum_k w^{nk} (C x C)^k;
    the two must agree.
    """
    _check_index(n, N, "n")
    fam = fourier_family(N)
    from_states = sum(np.outer(fam[k, n], fam[k, n].conj()) for k in range(N))
    CC = np.kron(cyclic_perm(N), cyclic_perm(N))
    w = np.exp(2j * np.pi / N)
    from_perm = sum(w ** (n * k) * np.linalg.matrix_power(CC, k) for k in range(N)) / N
    if not np.allclose(from_states, from_perm, rtol=0, atol=atol):
        raise ArithmeticError("projector constructions disagree")
    return from_states


def hadamard_parities(m: int, n: int) -> tuple[int, int, int, int]:
    """Eigenvalues of P1xP1, P3xP3, P1'xP1', P3'xP3' on |B^H_{m,n}>."""
    state = hadamard_bell(m, n)
    out = []
    for P in (pair_perm(1), pair_perm(3), primed_pair_perm(1), primed_pair_perm(3)):
        image = np.kron(P, P) @ state
        ev = np.vdot(state, image).real
        if not np.allclose(image, ev * state, rtol=0, atol=ATOL):
            raise ArithmeticError(f"B^H_{m},{n} is not a parity eigenstate")
        out.append(int(round(ev)))
    return tuple(out)


def hadamard_bijection_check(atol: float = ATOL) -> bool:
    """|B^H_{i,j}> == 2 H_{i,j} |B'^H_{j,i}> for all 16 index pairs, where the
    primed states are built the same way on the Hadamard basis."""
    H = hadamard_matrix()
    hb = hadamard_basis()
    for i in range(4):
        for j in range(4):
            lhs = hadamard_bell(i, j)
            rhs = 2 * H[i, j] * generalized_bell(hb, j, i, rule="hadamard")
            if not np.allclose(lhs, rhs, rtol=0, atol=atol):
                return False
    return True

