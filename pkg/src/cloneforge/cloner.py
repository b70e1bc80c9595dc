"""Cerf cloning states: joint state construction, amplitude duality, clone
density operators, fidelities, disturbances and information measures."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bases import hadamard_matrix
from .bell import BellFamily, bell_family, check_rule, error_operator
from .qlinalg import ATOL, normalize, permute_registers, reduced_density

# register order of a cloning state
R, A, B, C = range(4)

# bits; information differences below this are treated as zero
INFO_MARGIN = 1e-12


def check_amplitudes(a, atol: float = ATOL) -> np.ndarray:
    """Validate an N x N amplitude matrix with unit Frobenius norm."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"amplitude matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("amplitudes must be finite")
    total = float(np.sum(np.abs(a) ** 2))
    if abs(total - 1.0) > atol:
        raise ValueError(f"amplitudes are not normalized (sum |a|^2 = {total!r})")
    return a


def normalize_amplitudes(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    return a / np.sqrt(np.sum(np.abs(a) ** 2))


def random_amplitudes(N: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized matrix of independent standard complex Gaussians."""
    z = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return normalize_amplitudes(z)


@dataclass(frozen=True)
class CloningState:
    """Four-register pure state sum_{m,n} a_{m,n} |B_{m,n}>_RA |B*_{m,n}>_BC."""

    family: BellFamily
    a: np.ndarray
    joint: np.ndarray

    @property
    def dim(self) -> int:
        return self.family.dim

    @property
    def rule(self) -> str:
        return self.family.rule

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.dim,) * 4


def pair_product(family: BellFamily, coeffs: np.ndarray) -> np.ndarray:
    """sum_{m,n} c_{m,n} |B_{m,n}> (x) |B*_{m,n}> on two register pairs."""
    N = family.dim
    S = family.states.reshape(N * N, N * N)
    # einsum avoids building N^2 Kronecker products one by one
    return np.einsum("k,ki,kj->ij", coeffs.reshape(-1), S, S.conj()).reshape(-1)


def cerf_state(a, family: BellFamily) -> CloningState:
    a = check_amplitudes(a)
    if a.shape[0] != family.dim:
        raise ValueError(f"amplitude matrix is {a.shape[0]}x{a.shape[0]} but family has N={family.dim}")
    joint = pair_product(family, a)
    joint.setflags(write=False)
    return CloningState(family, a, joint)


def dual_amplitudes(a, rule: str = "fourier") -> np.ndarray:
    """Amplitudes of the second clone.

    fourier:  b_{m,n} = (1/N) sum_{x,y} exp(2 pi i (n x - m y) / N) a_{x,y}
    hadamard: b_{m,n} = sum_{x,y} H_{m,y} H_{n,x} a_{x,y}
    Both maps are involutions.
    """
    a = np.asarray(a, dtype=complex)
    N = a.shape[0]
    check_rule(rule, N)
    if rule == "fourier":
        k = np.arange(N)
        W = np.exp(2j * np.pi * np.outer(k, k) / N)
        return W.conj() @ a.T @ W / N
    H = hadamard_matrix()
    return H @ a.T @ H


def reexpand(state: CloningState, atol: float = ATOL) -> np.ndarray:
    """Coefficients of ``state`` in the (R,B),(A,C) pairing of the same family.

    Computed by direct projection onto |B_{m,n}>_RB |B*_{m,n}>_AC, independent
    of :func:`dual_amplitudes`.  Raises if the state is not spanned by those
    products.
    """
    N = state.dim
    swapped = permute_registers(state.joint, state.dims, (R, B, A, C))
    S = state.family.states.reshape(N * N, N * N)
    coeffs = np.einsum("ki,kj,ij->k", S.conj(), S, swapped.reshape(N * N, N * N))
    rebuilt = pair_product(state.family, coeffs)
    if not np.allclose(rebuilt, swapped, rtol=0, atol=1e3 * atol):
        raise ValueError("state is not a Cerf state in the (R,B),(A,C) pairing")
    return coeffs.reshape(N, N)


def project_reference(state: CloningState, psi) -> np.ndarray:
    """Project R onto <psi*| and renormalize; returns the (A, B, C) state."""
    psi = np.asarray(psi, dtype=complex)
    N = state.dim
    if psi.shape != (N,):
        raise ValueError("psi has the wrong dimension")
    # <psi*| has components conj(conj(psi_r)) = psi_r
    out = np.tensordot(psi, state.joint.reshape(N, N * N * N), axes=(0, 0))
    if np.linalg.norm(out) < ATOL:
        raise ValueError("projection of the reference has zero probability")
    return normalize(out)


def resent_state(a, rule: str, psi) -> np.ndarray:
    """sum_{m,n} a_{m,n} U_{m,n}|psi>_A |B*_{m,n}>_BC, built from error operators."""
    a = check_amplitudes(a)
    N = a.shape[0]
    fam = bell_family(rule, N=N)
    psi = np.asarray(psi, dtype=complex)
    out = np.zeros(N ** 3, dtype=complex)
    for m in range(N):
        for n in range(N):
            out += a[m, n] * np.kron(error_operator(rule, N, m, n) @ psi, fam[m, n].conj())
    return out


def _mixture(weights: np.ndarray, rule: str, psi: np.ndarray) -> np.ndarray:
    N = weights.shape[0]
    rho = np.zeros((N, N), dtype=complex)
    for m in range(N):
        for n in range(N):
            v = error_operator(rule, N, m, n) @ psi
            rho += weights[m, n] * np.outer(v, v.conj())
    return rho


def clone_densities(a, rule: str, psi) -> tuple[np.ndarray, np.ndarray]:
    """(rho_A, rho_B) = sum |a|^2 |psi_mn><psi_mn|, sum |b|^2 |psi_mn><psi_mn|."""
    a = check_amplitudes(a)
    psi = normalize(np.asarray(psi, dtype=complex))
    b = dual_amplitudes(a, rule)
    return _mixture(np.abs(a) ** 2, rule, psi), _mixture(np.abs(b) ** 2, rule, psi)


def clone_densities_by_trace(state: CloningState, psi) -> tuple[np.ndarray, np.ndarray]:
    """Same densities obtained by partial traces of the projected joint state."""
    abc = project_reference(state, psi)
    N = state.dim
    return reduced_density(abc, 0, (N, N, N)), reduced_density(abc, 1, (N, N, N))


def fidelity_and_disturbances(a) -> tuple[float, np.ndarray]:
    """F = sum_n |a_{0,n}|^2 and D_i = sum_n |a_{i,n}|^2 for i = 1..N-1."""
    rows = np.sum(np.abs(np.asarray(a)) ** 2, axis=1)
    return float(rows[0]), rows[1:].copy()


def shannon_entropy(p) -> float:
    """Entropy in bits with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def entropic_bound(a, rule: str = "fourier") -> tuple[float, float]:
    """(H[p], H[q]) for p = |a|^2 and q = |dual(a)|^2; H[p] + H[q] >= 2 log2 N."""
    a = check_amplitudes(a)
    b = dual_amplitudes(a, rule)
    return shannon_entropy(np.abs(a) ** 2), shannon_entropy(np.abs(b) ** 2)


def mutual_information(F: float, D: Sequence[float], N: int, atol: float = 1e-9) -> float:
    """Alice-clone information of the symmetric N-ary channel, uniform input.

    I = log2 N + F log2 F + sum_i D_i log2 D_i.
    """
    D = np.asarray(D, dtype=float)
    if D.shape != (N - 1,):
        raise ValueError(f"expected {N - 1} disturbances, got {D.shape}")
    if abs(F + D.sum() - 1.0) > atol:
        raise ValueError("fidelity and disturbances do not sum to 1")
    if np.ptp(D) > atol:
        raise ValueError("disturbances are not all equal; channel is not symmetric")
    return float(np.log2(N) - shannon_entropy(np.concatenate(([F], D))))


@dataclass(frozen=True)
class CloneReport:
    F_A: float
    F_B: float
    D_A: np.ndarray
    D_B: np.ndarray
    H_p: float
    H_q: float
    I_AB: float | None
    I_AE: float | None
    secure: bool
    a_matrix: np.ndarray
    b_matrix: np.ndarray

    def to_dict(self) -> dict:
        def mat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]
        return {
            "F_A": self.F_A,
            "F_B": self.F_B,
            "D_A": [float(x) for x in self.D_A],
            "D_B": [float(x) for x in self.D_B],
            "H_p": self.H_p,
            "H_q": self.H_q,
            "I_AB": self.I_AB,
            "I_AE": self.I_AE,
            "secure": self.secure,
            "a_matrix": mat(self.a_matrix),
            "b_matrix": mat(self.b_matrix),
        }


def _information_or_none(F: float, D: np.ndarray, N: int) -> float | None:
    try:
        return mutual_information(F, D, N)
    except ValueError:
        return None


def clone_report(a, rule: str = "fourier") -> CloneReport:
    """Full figures of merit for the cloner with amplitudes ``a``.

    Mutual informations are reported only for isotropic channels (equal
    disturbances); otherwise they are None and the verdict is insecure.
    """
    a = check_amplitudes(a)
    N = a.shape[0]
    b = dual_amplitudes(a, rule)
    F_A, D_A = fidelity_and_disturbances(a)
    F_B, D_B = fidelity_and_disturbances(b)
    H_p, H_q = entropic_bound(a, rule)
    I_AB = _information_or_none(F_A, D_A, N)
    I_AE = _information_or_none(F_B, D_B, N)
    # margin keeps rounding noise at the threshold from reading as a key rate
    secure = I_AB is not None and I_AE is not None and I_AB - I_AE > INFO_MARGIN
    return CloneReport(F_A, F_B, D_A, D_B, H_p, H_q, I_AB, I_AE, secure, a, b)
