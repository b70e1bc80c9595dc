"""Named numerical checks grouped into suites, each returning residuals.

Every check reports the largest deviation it saw and whether that deviation
is under its tolerance.  The CLI ``verify`` command runs these.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bell as bl
from .bases import computational_basis, fourier_basis, hadamard_basis, hadamard_matrix
from .cloner import (
    cerf_state,
    dual_amplitudes,
    entropic_bound,
    random_amplitudes,
    reexpand,
)
from .covariance import covariant_pattern, overlap_matrix, verify_covariance, xyz_pattern
from .optimize import symmetric_optimum
from .qlinalg import ATOL, permute_registers, reduced_density
from . import qubit_theorem as qt

TRIALS = 1000

# (P1, P3, P1', P3') eigenvalue signs of the Hadamard Bell states, row-major (m, n)
HADAMARD_PARITIES = (
    "++++", "+-++", "--++", "-+++",
    "+++-", "+-+-", "--+-", "-++-",
    "++--", "+---", "----", "-+--",
    "++-+", "+--+", "---+", "-+-+",
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "residual": self.residual}


def _check(name: str, residual: float, tol: float = ATOL) -> Check:
    residual = float(residual)
    return Check(name, bool(np.isfinite(residual) and residual <= tol), residual)


def _flag(name: str, ok: bool) -> Check:
    return Check(name, bool(ok), 0.0 if ok else 1.0)


def _families():
    fams = [bl.fourier_family(N) for N in (2, 3, 4)]
    fams.append(bl.bell_family("fourier", fourier_basis(4)))
    fams.append(bl.hadamard_family())
    fams.append(bl.bell_family("hadamard", hadamard_basis()))
    return fams


def bell_suite(rng: np.random.Generator | None = None) -> list[Check]:
    out = []
    ortho = ent = 0.0
    for fam in _families():
        M = fam.matrix()
        ortho = max(ortho, np.abs(M.conj().T @ M - np.eye(M.shape[1])).max())
        N = fam.dim
        for m, n in np.ndindex(N, N):
            for keep in (0, 1):
                r = reduced_density(fam.states[m, n], keep, (N, N))
                ent = max(ent, np.abs(r - np.eye(N) / N).max())
    out.append(_check("bell.orthonormal", ortho))
    out.append(_check("bell.maximally_entangled", ent))

    conj = 0.0
    for N in (2, 3, 4):
        for m, n in np.ndindex(N, N):
            conj = max(conj, np.abs(bl.fourier_bell(N, m, n).conj() - bl.fourier_bell(N, m, -n)).max())
    for m, n in np.ndindex(4, 4):
        conj = max(conj, np.abs(bl.hadamard_bell(m, n).imag).max())
    out.append(_check("bell.conjugation", conj))

    fb = fourier_basis(4)
    d1 = d2 = 0.0
    for m, n in np.ndindex(4, 4):
        t = bl.generalized_bell(fb, m, n)
        ref = bl.fourier_bell(4, -n, m)
        d1 = max(d1, np.abs(t - 1j ** (-n * m) * ref).max())
        d2 = max(d2, np.abs(t.conj() - 1j ** (n * m) * ref.conj()).max())
    out.append(_check("bell.fourier_basis_relation", d1))
    out.append(_check("bell.fourier_basis_relation_conj", d2))

    V = overlap_matrix(bl.fourier_family(4), bl.bell_family("fourier", fb))
    vres = 0.0
    for m, n, k, l in np.ndindex(4, 4, 4, 4):
        expect = 1j ** (m * k) * ((l + m) % 4 == 0) * (k == n)
        vres = max(vres, abs(V[4 * m + n, 4 * k + l] - expect))
    out.append(_check("bell.fourier_overlap_formula", vres))

    out.append(_flag("bell.hadamard_bijection", bl.hadamard_bijection_check()))
    signs = tuple("".join("+" if x > 0 else "-" for x in bl.hadamard_parities(m, n))
                  for m, n in np.ndindex(4, 4))
    out.append(_flag("bell.hadamard_parities", signs == HADAMARD_PARITIES))

    proj = 0.0
    for N in (2, 4):
        for n in range(N):
            try:
                P = bl.eigenspace_projector(n, N)
            except ArithmeticError:
                proj = np.inf
                continue
            proj = max(proj, np.abs(P @ P - P).max())
    out.append(_check("bell.eigenspace_projector", proj))

    err = 0.0
    for rule, N in (("fourier", 2), ("fourier", 3), ("fourier", 4), ("hadamard", 4)):
        fam = bl.bell_family(rule, N=N)
        for m, n in np.ndindex(N, N):
            U = bl.error_operator(rule, N, m, n)
            err = max(err, np.abs(np.kron(np.eye(N), U) @ fam[0, 0] - fam[m, n]).max())
    out.append(_check("bell.error_operators", err))
    return out


def _cross_overlap(bra: np.ndarray, ket: np.ndarray, N: int) -> complex:
    """<bra on (R,A),(B,C) | ket on (R,B),(A,C)>."""
    return np.vdot(bra, permute_registers(ket, (N,) * 4, (0, 2, 1, 3)))


def duality_suite(rng: np.random.Generator, trials: int = TRIALS) -> list[Check]:
    out = []
    for rule, N in (("fourier", 2), ("fourier", 3), ("fourier", 4), ("hadamard", 4)):
        fam = bl.bell_family(rule, N=N)
        worst = 0.0
        for _ in range(trials):
            a = random_amplitudes(N, rng)
            worst = max(worst, np.abs(reexpand(cerf_state(a, fam)) - dual_amplitudes(a, rule)).max())
        out.append(_check(f"duality.reexpand.{rule}.N{N}", worst))

    # <RA pair (i,j)|RB pair (m,n)> over the full index sweep
    H = hadamard_matrix()
    four = had = 0.0
    for i, j, m, n in np.ndindex(4, 4, 4, 4):
        bra = np.kron(bl.fourier_bell(4, i, j), bl.fourier_bell(4, i, -j))
        ket = np.kron(bl.fourier_bell(4, m, n), bl.fourier_bell(4, m, -n))
        expect = np.exp(2j * np.pi * (j * m - i * n) / 4) / 4
        four = max(four, abs(_cross_overlap(bra, ket, 4) - expect))
        bra = np.kron(bl.hadamard_bell(i, j), bl.hadamard_bell(i, j))
        ket = np.kron(bl.hadamard_bell(m, n), bl.hadamard_bell(m, n))
        had = max(had, abs(_cross_overlap(bra, ket, 4) - H[i, n] * H[m, j]))
    out.append(_check("duality.fourier_overlap", four))
    out.append(_check("duality.hadamard_overlap", had))

    inv = 0.0
    for rule in ("fourier", "hadamard"):
        for _ in range(100):
            a = random_amplitudes(4, rng)
            inv = max(inv, np.abs(dual_amplitudes(dual_amplitudes(a, rule), rule) - a).max())
    out.append(_check("duality.involution", inv))
    return out


def covariance_suite(rng: np.random.Generator | None = None) -> list[Check]:
    comp, fb, hb = computational_basis(4), fourier_basis(4), hadamard_basis()
    out = [
        _flag("covariance.comp_fourier.classes_6", covariant_pattern(comp, fb).n_params == 6),
        _flag("covariance.comp_hadamard.classes_5", covariant_pattern(comp, hb).n_params == 5),
        _flag("covariance.comp_hadamard.hadamard_rule_refines_xyz",
              covariant_pattern(comp, hb, "hadamard").is_refinement_of(xyz_pattern())),
    ]
    V = overlap_matrix(bl.fourier_family(4), bl.bell_family("fourier", fb))
    out.append(_check("covariance.V_1_2_2_3", abs(V[4 * 1 + 2, 4 * 2 + 3] + 1)))
    a_f = symmetric_optimum(xyz_pattern(), "fourier").a
    a_h = symmetric_optimum(xyz_pattern(), "hadamard").a
    out.append(_flag("covariance.fourier_optimum.fourier_basis", verify_covariance(a_f, fb)))
    out.append(_flag("covariance.fourier_optimum.rejects_hadamard_basis",
                     not verify_covariance(a_f, hb)))
    out.append(_flag("covariance.hadamard_optimum.hadamard_basis",
                     verify_covariance(a_h, hb, "hadamard")))
    return out


def qubit_theorem_suite(rng: np.random.Generator, trials: int = TRIALS) -> list[Check]:
    closed = mix = mix_orig = flip = diag = dens = 0.0
    cerf = True
    for _ in range(trials):
        s = qt.random_symmetric_state(rng)
        psi = qt.build_symmetric_state(s)
        flip = max(flip, np.abs(qt.flip_all(psi) - psi).max())
        born = qt.born_statistics(psi)
        cf = qt.closed_form_statistics(s)
        closed = max(closed, np.abs(born.P_E - cf.P_E).max(), np.abs(born.P_AE - cf.P_AE).max())
        for pairing in ("diagonal", "original"):
            d = qt.mixture_decomposition(s, pairing)
            st = d.statistics()
            r = max(np.abs(st.P_E - born.P_E).max(), np.abs(st.P_AE - born.P_AE).max())
            if pairing == "diagonal":
                mix = max(mix, r)
            else:
                mix_orig = max(mix_orig, r)
                dens = max(dens, np.abs(d.ra_density() - qt.effective_ra_density(s)).max())
            cerf &= all(qt.is_bell_diagonal(qt.build_symmetric_state(x)) for _, x in d.branches())
        rho = qt.ra_density(s)
        diag = max(diag, np.abs(np.diag(rho) - np.diag(qt.effective_ra_density(s))).max())
    return [
        _check("qubit.flip_invariance", flip),
        _check("qubit.closed_form_vs_born", closed),
        _check("qubit.mixture_statistics", mix),
        _check("qubit.mixture_statistics.original_pairing", mix_orig),
        _check("qubit.mixture_density.original_pairing", dens),
        _check("qubit.effective_density_diagonal", diag),
        _check("qubit.cross_terms", qt.cross_term_residual()),
        _flag("qubit.halves_bell_diagonal", cerf),
    ]


def entropy_suite(rng: np.random.Generator, trials: int = TRIALS) -> list[Check]:
    out = []
    for rule in ("fourier", "hadamard"):
        lowest = np.inf
        for _ in range(trials):
            lowest = min(lowest, sum(entropic_bound(random_amplitudes(4, rng), rule)))
        out.append(_check(f"entropy.bound.{rule}", max(0.0, 4.0 - lowest), 1e-9))
        peaked = np.zeros((4, 4))
        peaked[0, 0] = 1.0
        out.append(_check(f"entropy.peaked_equality.{rule}", abs(sum(entropic_bound(peaked, rule)) - 4.0)))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "bell": bell_suite,
    "duality": duality_suite,
    "covariance": covariance_suite,
    "qubit-theorem": qubit_theorem_suite,
    "entropy": entropy_suite,
}


def run_suite(name: str, rng: np.random.Generator) -> list[Check]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](rng)]
    return SUITES[name](rng)
