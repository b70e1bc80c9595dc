"""Numerical check that permutation-invariant qubit attacks reduce to Cerf states.

A 16-amplitude state of (R, A, B, C) that is invariant under the bit flip on
every register lives in an 8-dimensional subspace spanned by products of
qubit Bell states.  The statistics Alice (register R) and Eve (registers B, C)
observe in the computational basis are reproduced by a probabilistic mixture
of two Cerf states.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from functools import lru_cache

import numpy as np

from .bell import fourier_bell
from .qlinalg import ATOL, reduced_density

DIMS = (2, 2, 2, 2)

# (R,A) Bell label, (B,C) Bell label for each amplitude, in field order
TERMS = (
    ((0, 0), (0, 0)),  # alpha_plus
    ((0, 1), (0, 1)),  # alpha_minus
    ((1, 0), (1, 0)),  # beta_plus
    ((1, 1), (1, 1)),  # beta_minus
    ((1, 0), (0, 0)),  # gamma_plus
    ((1, 1), (0, 1)),  # gamma_minus
    ((0, 0), (1, 0)),  # delta_plus
    ((0, 1), (1, 1)),  # delta_minus
)
DIAGONAL_TERMS = TERMS[:4]


@lru_cache(maxsize=None)
def _bell(mn: tuple[int, int]) -> np.ndarray:
    v = fourier_bell(2, *mn)
    v.setflags(write=False)
    return v


@dataclass(frozen=True)
class SymmetricQubitState:
    alpha_plus: complex = 0
    alpha_minus: complex = 0
    beta_plus: complex = 0
    beta_minus: complex = 0
    gamma_plus: complex = 0
    gamma_minus: complex = 0
    delta_plus: complex = 0
    delta_minus: complex = 0

    def __post_init__(self):
        total = sum(abs(complex(x)) ** 2 for x in astuple(self))
        if abs(total - 1.0) > ATOL:
            raise ValueError(f"amplitudes are not normalized (sum |.|^2 = {total!r})")

    @classmethod
    def from_array(cls, amps) -> "SymmetricQubitState":
        amps = np.asarray(amps, dtype=complex)
        if amps.shape != (8,):
            raise ValueError("expected 8 amplitudes")
        return cls(*(complex(x) for x in amps))

    def as_array(self) -> np.ndarray:
        return np.array([complex(getattr(self, f.name)) for f in fields(self)])


def random_symmetric_state(rng: np.random.Generator) -> SymmetricQubitState:
    z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    return SymmetricQubitState.from_array(z / np.linalg.norm(z))


def _combine(amps: np.ndarray, terms) -> np.ndarray:
    out = np.zeros(16, dtype=complex)
    for c, (ra, bc) in zip(amps, terms):
        if c != 0:
            out += c * np.kron(_bell(ra), _bell(bc))
    return out


def build_symmetric_state(state: SymmetricQubitState) -> np.ndarray:
    return _combine(state.as_array(), TERMS)


def flip_all(psi: np.ndarray) -> np.ndarray:
    """(C x C x C x C)|psi> for the qubit flip C."""
    return psi.reshape(DIMS)[::-1, ::-1, ::-1, ::-1].reshape(-1)


def effective_ra_density(state: SymmetricQubitState) -> np.ndarray:
    """Bell-diagonal part of rho_RA; identical statistics in the computational basis."""
    w = np.abs(state.as_array()) ** 2
    weights = {
        (0, 0): w[0] + w[6],
        (1, 0): w[2] + w[4],
        (0, 1): w[1] + w[7],
        (1, 1): w[3] + w[5],
    }
    return sum(p * np.outer(_bell(mn), _bell(mn).conj()) for mn, p in weights.items())


def ra_density(state: SymmetricQubitState) -> np.ndarray:
    return reduced_density(build_symmetric_state(state), [0, 1], DIMS)


@dataclass(frozen=True)
class AttackStatistics:
    """P_E[i, j]: Eve sees B = i, C = j.  P_AE[k, i, j]: additionally R = k (joint)."""

    P_E: np.ndarray
    P_AE: np.ndarray

    def conditional(self) -> np.ndarray:
        """P(R = k | B = i, C = j); zero where Eve's outcome never occurs."""
        with np.errstate(invalid="ignore", divide="ignore"):
            out = self.P_AE / self.P_E[None, :, :]
        return np.where(self.P_E[None, :, :] > 0, out, 0.0)

    def allclose(self, other: "AttackStatistics", atol: float = ATOL) -> bool:
        return (np.allclose(self.P_E, other.P_E, rtol=0, atol=atol)
                and np.allclose(self.P_AE, other.P_AE, rtol=0, atol=atol))


def born_statistics(psi: np.ndarray) -> AttackStatistics:
    """Computational-basis measurement of R, B and C; A is traced out."""
    p = np.abs(psi.reshape(DIMS)) ** 2
    P_AE = p.sum(axis=1)
    return AttackStatistics(P_AE.sum(axis=0), P_AE)


def closed_form_statistics(state: SymmetricQubitState) -> AttackStatistics:
    ap, am, bp, bm, gp, gm, dp, dm = state.as_array()
    pe00 = 0.5 * (abs(ap) ** 2 + abs(am) ** 2 + abs(gp) ** 2 + abs(gm) ** 2)
    pe01 = 0.5 * (abs(bp) ** 2 + abs(bm) ** 2 + abs(dp) ** 2 + abs(dm) ** 2)
    p0_00 = 0.5 * pe00 + 0.5 * (ap * np.conj(am)).real + 0.5 * (gp * np.conj(gm)).real
    p0_01 = 0.5 * pe01 + 0.5 * (bp * np.conj(bm)).real + 0.5 * (dp * np.conj(dm)).real
    P_E = np.array([[pe00, pe01], [pe01, pe00]])
    P_AE = np.empty((2, 2, 2))
    P_AE[0, 0, 0] = P_AE[1, 1, 1] = p0_00
    P_AE[1, 0, 0] = P_AE[0, 1, 1] = pe00 - p0_00
    P_AE[0, 0, 1] = P_AE[1, 1, 0] = p0_01
    P_AE[1, 0, 1] = P_AE[0, 1, 0] = pe01 - p0_01
    return AttackStatistics(P_E, P_AE)


def attack_statistics(state: SymmetricQubitState, atol: float = ATOL) -> AttackStatistics:
    """Born-rule statistics, cross-checked against the closed forms."""
    born = born_statistics(build_symmetric_state(state))
    if not born.allclose(closed_form_statistics(state), atol):
        raise ArithmeticError("closed-form statistics disagree with the Born rule")
    return born


@dataclass(frozen=True)
class MixtureDecomposition:
    """With probability P1 Eve runs state1, otherwise state2 (None if P = 0)."""

    P1: float
    state1: SymmetricQubitState | None
    P2: float
    state2: SymmetricQubitState | None

    def branches(self):
        return [(P, s) for P, s in ((self.P1, self.state1), (self.P2, self.state2)) if s is not None]

    def statistics(self) -> AttackStatistics:
        P_E = np.zeros((2, 2))
        P_AE = np.zeros((2, 2, 2))
        for P, s in self.branches():
            st = born_statistics(build_symmetric_state(s))
            P_E += P * st.P_E
            P_AE += P * st.P_AE
        return AttackStatistics(P_E, P_AE)

    def ra_density(self) -> np.ndarray:
        return sum(P * ra_density(s) for P, s in self.branches())


def _block(z: np.ndarray, slots: slice) -> tuple[float, SymmetricQubitState | None]:
    P = float(np.sum(np.abs(z) ** 2))
    if P == 0:
        return 0.0, None
    amps = np.zeros(8, dtype=complex)
    amps[slots] = z / np.sqrt(P)
    return P, SymmetricQubitState.from_array(amps)


def mixture_decomposition(state: SymmetricQubitState, pairing: str = "diagonal") -> MixtureDecomposition:
    """Split the attack into an (alpha, beta) Cerf state and a (gamma, delta) one.

    ``pairing="diagonal"`` moves the gamma/delta amplitudes onto the diagonal
    Bell products (the alpha/beta slots); this reproduces every statistic
    involving Eve.  ``pairing="original"`` keeps their own off-diagonal
    Bell pairing, which is still Bell-diagonal on (R, A) and additionally
    reproduces the effective Alice-Bob density.
    """
    if pairing not in ("diagonal", "original"):
        raise ValueError(f"unknown pairing {pairing!r}")
    z = state.as_array()
    P1, s1 = _block(z[:4], slice(0, 4))
    P2, s2 = _block(z[4:], slice(0, 4) if pairing == "diagonal" else slice(4, 8))
    return MixtureDecomposition(P1, s1, P2, s2)


def cross_term_residual() -> float:
    """max |<pq|B_ij><B_mn|pq>| over qubit Bell labels with m != i."""
    worst = 0.0
    for i, j, m, n in np.ndindex(2, 2, 2, 2):
        if m == i:
            continue
        prod = _bell((i, j)) * _bell((m, n)).conj()
        worst = max(worst, float(np.abs(prod).max()))
    return worst


def is_bell_diagonal(psi: np.ndarray, atol: float = ATOL) -> bool:
    """True iff Tr_BC |psi><psi| is diagonal in the qubit Bell basis."""
    rho = reduced_density(psi, [0, 1], DIMS)
    Bm = np.array([_bell((m, n)) for m in range(2) for n in range(2)]).T
    r = Bm.conj().T @ rho @ Bm
    return bool(np.allclose(r - np.diag(np.diag(r)), 0, atol=atol))
