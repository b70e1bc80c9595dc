import io

import numpy as np
import pytest

from cloneforge.bases import computational_basis, fourier_basis, hadamard_basis
from cloneforge.cloner import dual_amplitudes
from cloneforge.covariance import (
    covariant_pattern,
    isotropic_abc_pattern,
    universal_pattern,
    xyz_pattern,
)
from cloneforge.optimize import (
    CloneProblem,
    InfeasibleError,
    ck_verdict,
    curve_symmetric_point,
    error_threshold,
    fmt,
    grid_symmetric_point,
    isotropy_residual,
    self_dual_point,
    symmetric_optimum,
    tradeoff_curve,
    universal_cloner,
    universal_fidelity,
)

COMP = computational_basis(4)
OPT = np.array([[3, 1, 1, 1]] + [[1, 1 / 3, 1 / 3, 1 / 3]] * 3) / 4


def test_ck_verdict_examples():
    v = ck_verdict(0.792, 0.792)
    assert not v.secure and v.R_lower == 0
    v = ck_verdict(2.0, 0.0)
    assert v.secure and v.R_lower == 2.0


def test_isotropy_residual_examples():
    assert isotropy_residual(OPT) < 1e-12
    p5 = covariant_pattern(COMP, hadamard_basis())
    a = p5.matrix([0.9, 0.2, 0.3, 0.3, 0.3])
    assert isotropy_residual(a / np.linalg.norm(a)) < 1e-12
    d = np.sqrt((0.5 ** 2 + 0.1 ** 2) / 2)  # 2 d^2 = c^2 + e^2
    a = p5.matrix([0.9, 0.2, 0.5, d, 0.1])
    assert isotropy_residual(a / np.linalg.norm(a)) < 1e-12
    a = p5.matrix([0.9, 0.2, 0.5, 0.3, 0.3])
    assert isotropy_residual(a / np.linalg.norm(a)) > 1e-3


def test_isotropy_forms_match_residual(rng):
    prob = CloneProblem(covariant_pattern(COMP, hadamard_basis()), "fourier")
    for _ in range(10):
        p = np.abs(rng.normal(size=5))
        p /= np.sqrt(p @ prob.G @ p)
        a = prob.amplitudes(p)
        D = np.sum(np.abs(a) ** 2, axis=1)[1:]
        spread = sorted(abs(p @ Q @ p) for Q in prob.isotropy_forms)
        assert abs(spread[-1] - np.max(np.abs(D - D[0]))) < 1e-12
        assert (isotropy_residual(a) < 1e-12) == all(abs(p @ Q @ p) < 1e-12 for Q in prob.isotropy_forms)


def test_quadratic_forms_match_report(rng):
    for pattern, rule in ((xyz_pattern(), "fourier"), (isotropic_abc_pattern(), "fourier"),
                          (xyz_pattern(), "hadamard")):
        prob = CloneProblem(pattern, rule)
        p = np.abs(rng.normal(size=pattern.n_params))
        p /= np.sqrt(p @ prob.G @ p)
        a = prob.amplitudes(p)
        b = dual_amplitudes(a, rule)
        fa, fb = prob.fidelities(p[None, :])
        assert abs(fa[0] - np.sum(np.abs(a[0]) ** 2)) < 1e-12
        assert abs(fb[0] - np.sum(np.abs(b[0]) ** 2)) < 1e-12


def test_fourier_symmetric_optimum_matrix():
    opt = symmetric_optimum(xyz_pattern(), "fourier")
    assert abs(opt.fidelity - 0.75) < 1e-6
    assert np.allclose(opt.a.real, OPT, atol=1e-6)
    assert np.allclose(opt.report.D_A, 1 / 12, atol=1e-6)
    assert np.allclose(opt.b, dual_amplitudes(opt.a, "fourier"), atol=1e-12)


def test_hadamard_rule_optimum():
    opt = symmetric_optimum(xyz_pattern(), "hadamard")
    assert abs(opt.fidelity - 0.75) < 1e-6
    assert abs(error_threshold(xyz_pattern(), "hadamard") - 0.25) < 1e-6


def test_covariant_patterns_do_not_beat_reduced():
    six = covariant_pattern(COMP, fourier_basis(4))
    assert symmetric_optimum(six, "fourier").fidelity <= 0.75 + 1e-4
    ten = covariant_pattern(COMP, hadamard_basis(), "hadamard")
    assert abs(symmetric_optimum(ten, "hadamard").fidelity - 0.75) < 1e-4


def test_hadamard_pair_fourier_rule():
    opt = symmetric_optimum(isotropic_abc_pattern(), "fourier")
    assert abs(opt.fidelity - 0.7018) < 1e-3
    assert isotropy_residual(opt.a) < 1e-9
    sd = self_dual_point(isotropic_abc_pattern(), "fourier")
    assert abs(sd.fidelity - 0.7) < 1e-9
    assert np.allclose(sd.a, sd.b, atol=1e-9)
    # the full five-class pattern with isotropy does better than the three-class family
    five = symmetric_optimum(covariant_pattern(COMP, hadamard_basis()), "fourier")
    assert five.fidelity > opt.fidelity + 1e-3
    assert isotropy_residual(five.a) < 1e-9


@pytest.mark.parametrize("pattern,rule,target,tol", [
    (xyz_pattern(), "fourier", 0.75, 1e-6),
    (isotropic_abc_pattern(), "fourier", 0.7017910046, 1e-6),
])
def test_curve_bisection_agrees(pattern, rule, target, tol):
    assert abs(curve_symmetric_point(pattern, rule) - target) < tol


def test_tradeoff_curve_properties():
    curve = tradeoff_curve(isotropic_abc_pattern(), "fourier", True, 41)
    fa, fb = curve.points.T
    assert abs(fa[0] - 0.25) < 1e-12 and abs(fa[-1] - 1) < 1e-12
    # the solver meets F_A = 1 only to its constraint tolerance, and F_B moves
    # like the square root of that slack at this boundary
    assert abs(fb[-1] - 0.25) < 1e-6
    assert abs(fb[0] - 1) < 1e-6
    assert np.all(np.diff(fb) <= 1e-7)
    prob = CloneProblem(curve.pattern, "fourier")
    for p, (x, y) in zip(curve.params, curve.points):
        assert abs(p @ prob.G @ p - 1) < 1e-9
        a = prob.amplitudes(p)
        b = dual_amplitudes(a, "fourier")
        assert abs(np.sum(np.abs(a[0]) ** 2) - x) < 1e-9
        assert abs(np.sum(np.abs(b) ** 2) - 1) < 1e-9
        assert isotropy_residual(a) < 1e-9
        assert np.sum(np.abs(b[0]) ** 2) <= y + 1e-9


def test_grid_doubling_is_stable():
    c1 = tradeoff_curve(isotropic_abc_pattern(), "fourier", True, 101).crossing()
    c2 = tradeoff_curve(isotropic_abc_pattern(), "fourier", True, 201).crossing()
    assert abs(c1 - c2) < 5e-4


def test_csv_output():
    curve = tradeoff_curve(xyz_pattern(), "fourier", True, 11)
    buf = io.StringIO(newline="")
    curve.write_csv(buf)
    text = buf.getvalue()
    assert text.startswith("F_A,F_B,x,y,z\n")
    assert "\r" not in text
    assert len(text.strip().split("\n")) == 12


def test_grid_route_agrees_with_solver():
    for pattern in (xyz_pattern(), universal_pattern(4)):
        val, _ = grid_symmetric_point(pattern, "fourier")
        assert abs(val - symmetric_optimum(pattern, "fourier").fidelity) < 2e-3
    with pytest.raises(ValueError):
        grid_symmetric_point(covariant_pattern(COMP, hadamard_basis()), "fourier")


def test_infeasible_fidelity():
    prob = CloneProblem(xyz_pattern(), "fourier")
    with pytest.raises(InfeasibleError):
        prob.max_fb_at(0.1)
    with pytest.raises(InfeasibleError):
        prob.max_fb_at(1.1)


@pytest.mark.parametrize("N", range(2, 9))
def test_universal_cloner(N):
    u = universal_cloner(N)
    assert abs(u.fidelity - universal_fidelity(N)) < 1e-9
    assert np.allclose(dual_amplitudes(u.a, "fourier"), u.a, atol=1e-12)


def test_universal_ququart_values():
    u = universal_cloner(4)
    assert abs(u.a[0, 0] - np.sqrt(10) / 4) < 1e-12
    assert abs(u.a[1, 2] - np.sqrt(10) / 20) < 1e-12
    assert abs(u.fidelity - 0.7) < 1e-12
    assert universal_fidelity(2) == 5 / 6
    with pytest.raises(ValueError):
        universal_cloner(1)


def test_fmt():
    assert fmt(0.75) == "0.75"
    assert fmt(1 / 3) == "0.333333333333333"
    assert fmt(-2.0) == "-2.0"
