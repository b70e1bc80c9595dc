"""Fidelity trade-offs and optimal cloners over an amplitude pattern.

Amplitudes are restricted to real non-negative values, one per pattern class.
Normalization, both fidelities and the disturbances are then quadratic forms
in the class values, which keeps every evaluation exact and cheap.

Two independent routes locate the symmetric cloner: a constrained SLSQP solve
started from a fixed set of points, and a nested grid refinement over
hyperspherical angles.  Neither uses random numbers.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import TextIO

import numpy as np
from scipy import linalg, optimize

from .cloner import CloneReport, clone_report, dual_amplitudes
from .covariance import AmplitudePattern, universal_pattern

ISO_TOL = 1e-9
CONSTRAINT_TOL = 1e-10
RESTART_EVERY = 10


class InfeasibleError(ValueError):
    """No amplitudes satisfy the requested constraints."""


@dataclass(frozen=True)
class Verdict:
    secure: bool
    R_lower: float


def ck_verdict(I_AB: float, I_AE: float) -> Verdict:
    """One-way key distillation is possible iff Bob knows more than Eve."""
    return Verdict(I_AB > I_AE, max(0.0, I_AB - I_AE))


def isotropy_residual(a) -> float:
    """Largest pairwise gap between the disturbances of the first clone."""
    D = np.sum(np.abs(np.asarray(a)) ** 2, axis=1)[1:]
    return float(np.ptp(D)) if D.size else 0.0


@dataclass(frozen=True)
class CloneProblem:
    """Quadratic forms of one pattern under one duality rule."""

    pattern: AmplitudePattern
    rule: str = "fourier"

    @property
    def N(self) -> int:
        return self.pattern.dim

    @property
    def k(self) -> int:
        return self.pattern.n_params

    @cached_property
    def _forms(self) -> dict[str, np.ndarray]:
        E = self.pattern.indicators()
        Bd = np.array([dual_amplitudes(e, self.rule) for e in E])
        # row-wise quadratic forms: rows_A[i] gives sum_n |a_{i,n}|^2
        rows_A = np.einsum("cin,din->icd", E, E)
        rows_B = np.einsum("cin,din->icd", Bd.conj(), Bd).real
        return {
            "G": np.diag(self.pattern.class_sizes().astype(float)),
            "rows_A": rows_A,
            "rows_B": rows_B,
        }

    @property
    def G(self) -> np.ndarray:
        return self._forms["G"]

    @property
    def QA(self) -> np.ndarray:
        return self._forms["rows_A"][0]

    @property
    def QB(self) -> np.ndarray:
        return self._forms["rows_B"][0]

    @cached_property
    def isotropy_forms(self) -> list[np.ndarray]:
        """Forms D_i - D_1 (first clone) that are not identically zero."""
        rows = self._forms["rows_A"]
        return [rows[i] - rows[1] for i in range(2, self.N)
                if not np.allclose(rows[i], rows[1], rtol=0, atol=1e-14)]

    @property
    def identically_isotropic(self) -> bool:
        return not self.isotropy_forms

    def amplitudes(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return self.pattern.matrix(p / np.sqrt(p @ self.G @ p))

    def fidelities(self, P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """F_A, F_B for each row of P (rows need not be normalized)."""
        P = np.atleast_2d(P)
        n = np.einsum("mc,cd,md->m", P, self.G, P)
        fa = np.einsum("mc,cd,md->m", P, self.QA, P) / n
        fb = np.einsum("mc,cd,md->m", P, self.QB, P) / n
        return fa, fb

    def disturbance_spread(self, P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        n = np.einsum("mc,cd,md->m", P, self.G, P)
        spread = np.zeros(P.shape[0])
        for Q in self.isotropy_forms:
            spread = np.maximum(spread, np.abs(np.einsum("mc,cd,md->m", P, Q, P)) / n)
        return spread

    # constrained local solves -------------------------------------------

    def _starts(self) -> list[np.ndarray]:
        k = self.k
        ones = np.ones(k)
        starts = [ones]
        for c in range(k):
            e = np.zeros(k)
            e[c] = 1.0
            starts.append(e + 0.25 * ones)
        for c, d in itertools.combinations(range(k), 2):
            e = 0.25 * ones
            e[c] += 1.0
            e[d] += 1.0
            starts.append(e)
        return [s / np.sqrt(s @ self.G @ s) for s in starts]

    def _constraints(self, isotropy: bool, extra: list[dict]) -> list[dict]:
        G = self.G
        cons = [{"type": "eq", "fun": lambda p: p @ G @ p - 1.0, "jac": lambda p: 2 * G @ p}]
        if isotropy:
            for Q in self.isotropy_forms:
                cons.append({"type": "eq", "fun": lambda p, Q=Q: p @ Q @ p,
                             "jac": lambda p, Q=Q: 2 * Q @ p})
        return cons + extra

    def _feasible(self, p: np.ndarray, cons: list[dict]) -> bool:
        return bool(np.all(p >= -CONSTRAINT_TOL)) and all(
            abs(c["fun"](p)) <= 1e3 * CONSTRAINT_TOL for c in cons)

    def _maximize(self, Q: np.ndarray, cons: list[dict], starts: list[np.ndarray]):
        best = None
        for x0 in starts:
            res = optimize.minimize(
                lambda p: -(p @ Q @ p), x0, jac=lambda p: -2 * Q @ p,
                method="SLSQP", bounds=[(0.0, None)] * self.k, constraints=cons,
                options={"ftol": 1e-12, "maxiter": 500},
            )
            p = np.clip(res.x, 0.0, None)
            if not self._feasible(p, cons):
                continue
            val = p @ Q @ p
            if best is None or val > best[0] + 1e-13:
                best = (val, p)
        return best

    def max_fb_at(self, F_A: float, isotropy: bool = True,
                  warm: np.ndarray | None = None) -> tuple[float, np.ndarray]:
        """Largest F_B over the pattern with the first fidelity fixed to F_A.

        With ``warm`` given, only that start is tried (continuation along a
        curve); the fixed start set is the fallback.
        """
        if not 1.0 / self.N - 1e-12 <= F_A <= 1.0 + 1e-12:
            raise InfeasibleError(f"F_A={F_A} lies outside [1/N, 1]")
        QA, G = self.QA, self.G
        fix = {"type": "eq", "fun": lambda p: p @ QA @ p - F_A * (p @ G @ p),
               "jac": lambda p: 2 * (QA - F_A * G) @ p}
        cons = self._constraints(isotropy, [fix])
        best = self._maximize(self.QB, cons, [warm]) if warm is not None else None
        if best is None:
            best = self._maximize(self.QB, cons, self._starts())
        if best is None:
            raise InfeasibleError(f"no feasible amplitudes with F_A={F_A}")
        return float(best[0]), best[1]

    def max_symmetric(self, isotropy: bool = True) -> tuple[float, np.ndarray]:
        """Largest common fidelity with F_A == F_B."""
        D = self.QA - self.QB
        sym = {"type": "eq", "fun": lambda p: p @ D @ p, "jac": lambda p: 2 * D @ p}
        best = self._maximize(self.QA, self._constraints(isotropy, [sym]), self._starts())
        if best is None:
            raise InfeasibleError("no symmetric point satisfies the constraints")
        return float(best[0]), best[1]


@dataclass(frozen=True)
class TradeoffCurve:
    points: np.ndarray  # columns F_A, F_B
    params: np.ndarray  # normalized class values, one row per point
    pattern: AmplitudePattern
    isotropy: bool
    rule: str = "fourier"

    def crossing(self) -> float:
        """Fidelity where F_B(F_A) meets the diagonal, by linear interpolation."""
        g = self.points[:, 1] - self.points[:, 0]
        idx = np.flatnonzero((g[:-1] >= 0) & (g[1:] <= 0))
        if idx.size == 0:
            raise InfeasibleError("trade-off curve never crosses F_A = F_B")
        i = idx[0]
        x0, x1 = self.points[i, 0], self.points[i + 1, 0]
        w = g[i] / (g[i] - g[i + 1]) if g[i] != g[i + 1] else 0.0
        return float(x0 + w * (x1 - x0))

    def write_csv(self, fh: TextIO) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["F_A", "F_B", *self.pattern.labels])
        for (fa, fb), p in zip(self.points, self.params):
            w.writerow([fmt(fa), fmt(fb), *(fmt(x) for x in p)])


def fmt(x: float) -> str:
    """Shortest round-trip form, capped at 15 significant digits."""
    s = repr(float(x))
    mantissa = s.split("e")[0].replace("-", "").replace(".", "").strip("0")
    if len(mantissa) <= 15:
        return s
    short = f"{x:.15g}"
    # rounding up the largest doubles would overflow
    return short if np.isfinite(float(short)) else s


@dataclass(frozen=True)
class OptimalCloner:
    a: np.ndarray
    b: np.ndarray
    report: CloneReport
    params: np.ndarray = field(default=None)

    @property
    def fidelity(self) -> float:
        return self.report.F_A


def _cloner(problem: CloneProblem, p: np.ndarray) -> OptimalCloner:
    a = problem.amplitudes(p)
    rep = clone_report(a, problem.rule)
    norm_p = p / np.sqrt(p @ problem.G @ p)
    return OptimalCloner(rep.a_matrix, rep.b_matrix, rep, norm_p)


def tradeoff_curve(pattern: AmplitudePattern, rule: str = "fourier", isotropy: bool = True,
                   grid: int = 101) -> TradeoffCurve:
    """max F_B at each F_A of an even grid over [1/N, 1]."""
    if grid < 2:
        raise ValueError("grid needs at least two points")
    problem = CloneProblem(pattern, rule)
    pts, params = [], []
    p = None
    for i, fa in enumerate(np.linspace(1.0 / pattern.dim, 1.0, grid)):
        # periodic cold restarts keep continuation from locking onto a local branch
        warm = None if i % RESTART_EVERY == 0 else p
        fb, p = problem.max_fb_at(float(fa), isotropy, warm)
        pts.append((fa, fb))
        params.append(p)
    return TradeoffCurve(np.array(pts), np.array(params), pattern, isotropy, rule)


def curve_symmetric_point(pattern: AmplitudePattern, rule: str = "fourier",
                          isotropy: bool = True, grid: int = 31, xtol: float = 1e-10) -> float:
    """Root of max F_B(F_A) - F_A, bracketed on a coarse curve then bisected."""
    problem = CloneProblem(pattern, rule)
    curve = tradeoff_curve(pattern, rule, isotropy, grid)
    g = curve.points[:, 1] - curve.points[:, 0]
    idx = np.flatnonzero((g[:-1] >= 0) & (g[1:] <= 0))
    if idx.size == 0:
        raise InfeasibleError("trade-off curve never crosses F_A = F_B")
    lo, hi = curve.points[idx[0], 0], curve.points[idx[0] + 1, 0]
    if g[idx[0]] == 0:
        return float(lo)
    warm = curve.params[idx[0]]
    return float(optimize.brentq(lambda t: problem.max_fb_at(t, isotropy, warm)[0] - t,
                                 lo, hi, xtol=xtol))


def symmetric_optimum(pattern: AmplitudePattern, rule: str = "fourier",
                      isotropy: bool = True) -> OptimalCloner:
    """Cloner with the largest fidelity shared equally by both clones."""
    problem = CloneProblem(pattern, rule)
    _, p = problem.max_symmetric(isotropy)
    out = _cloner(problem, p)
    if abs(out.report.F_A - out.report.F_B) >= 1e-6:
        raise InfeasibleError("solver did not reach a symmetric point")
    return out


def _angles_to_unit(theta: np.ndarray) -> np.ndarray:
    """Hyperspherical angles in [0, pi/2]^(k-1) -> points of the positive orthant."""
    M, d = theta.shape
    u = np.ones((M, d + 1))
    for j in range(d):
        u[:, j] *= np.cos(theta[:, j])
        u[:, j + 1:] *= np.sin(theta[:, j])[:, None]
    return u


def grid_symmetric_point(pattern: AmplitudePattern, rule: str = "fourier",
                         points: int = 41, passes: int = 3, factor: float = 10.0
                         ) -> tuple[float, np.ndarray]:
    """Nested grid maximization of min(F_A, F_B) over normalized amplitudes.

    Normalization is removed by scaling class values onto the unit sphere in
    the class-size metric.  Only patterns whose disturbances are equal for
    every choice of values are accepted.
    """
    problem = CloneProblem(pattern, rule)
    if not problem.identically_isotropic:
        raise ValueError("grid route needs a pattern that is isotropic by construction")
    d = problem.k - 1
    scale = 1.0 / np.sqrt(pattern.class_sizes())
    if d == 0:
        p = scale.copy()
        fa, fb = problem.fidelities(p)
        return float(min(fa[0], fb[0])), p
    lo = np.zeros(d)
    hi = np.full(d, np.pi / 2)
    best_val, best_theta = -np.inf, None
    for _ in range(passes + 1):
        axes = [np.linspace(lo[j], hi[j], points) for j in range(d)]
        theta = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        P = _angles_to_unit(theta) * scale
        fa, fb = problem.fidelities(P)
        score = np.minimum(fa, fb)
        i = int(np.argmax(score))
        if score[i] > best_val:
            best_val, best_theta = float(score[i]), theta[i]
        half = (hi - lo) / factor
        lo = np.clip(best_theta - half, 0.0, np.pi / 2)
        hi = np.clip(best_theta + half, 0.0, np.pi / 2)
    p = _angles_to_unit(best_theta[None, :])[0] * scale
    return best_val, p


def self_dual_point(pattern: AmplitudePattern, rule: str = "fourier") -> OptimalCloner:
    """Best cloner in the pattern whose amplitudes equal their own dual entrywise.

    The self-dual amplitudes form the real null space of (dual - identity)
    restricted to the pattern; the fidelity is maximized on it exactly by a
    generalized eigenproblem.
    """
    problem = CloneProblem(pattern, rule)
    E = pattern.indicators()
    cols = [(dual_amplitudes(e, rule) - e).ravel() for e in E]
    M = np.array(cols).T
    Z = linalg.null_space(np.vstack([M.real, M.imag]), rcond=1e-10)
    if Z.shape[1] == 0:
        raise InfeasibleError("pattern admits no self-dual amplitudes")
    vals, vecs = linalg.eigh(Z.T @ problem.QA @ Z, Z.T @ problem.G @ Z)
    p = Z @ vecs[:, -1]
    if p.sum() < 0:
        p = -p
    if np.any(p < -1e-10):
        raise InfeasibleError("best self-dual amplitudes are not non-negative")
    return _cloner(problem, np.clip(p, 0.0, None))


def universal_cloner(N: int) -> OptimalCloner:
    """Self-dual cloner with a_00 = (N+1) b and every other amplitude b.

    Its fidelity is (N+3) / (2(N+1)).
    """
    if N < 2:
        raise ValueError("universal cloner needs N >= 2")
    b = 1.0 / np.sqrt(2.0 * N * (N + 1))
    problem = CloneProblem(universal_pattern(N), "fourier")
    return _cloner(problem, np.array([(N + 1) * b, b]))


def universal_fidelity(N: int) -> float:
    return (3.0 + N) / (2.0 * (1.0 + N))


def error_threshold(pattern: AmplitudePattern, rule: str = "fourier") -> float:
    """Largest tolerable error rate 1 - F at the symmetric optimum."""
    return 1.0 - symmetric_optimum(pattern, rule).report.F_A
