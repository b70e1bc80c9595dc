import numpy as np
import pytest

from cloneforge import bell as bl
from cloneforge.bases import hadamard_basis, hadamard_matrix
from cloneforge.cloner import (
    cerf_state,
    check_amplitudes,
    clone_densities,
    clone_densities_by_trace,
    clone_report,
    dual_amplitudes,
    entropic_bound,
    fidelity_and_disturbances,
    mutual_information,
    project_reference,
    random_amplitudes,
    reexpand,
    resent_state,
    shannon_entropy,
)
from cloneforge.covariance import xyz_pattern
from cloneforge.qlinalg import reduced_density

OPT = xyz_pattern().matrix([0.75, 0.25, 0.25 / 3])
PEAK = np.zeros((4, 4))
PEAK[0, 0] = 1.0


def test_peaked_state_is_single_product():
    st = cerf_state(PEAK, bl.fourier_family(4))
    want = np.kron(bl.fourier_bell(4, 0, 0), bl.fourier_bell(4, 0, 0))
    assert np.allclose(st.joint, want, atol=1e-15)


@pytest.mark.parametrize("rule", ["fourier", "hadamard"])
def test_cerf_state_norm_and_bell_diagonal(rng, rule):
    fam = bl.bell_family(rule, N=4)
    B = fam.matrix()
    for _ in range(100):
        a = random_amplitudes(4, rng)
        st = cerf_state(a, fam)
        assert abs(np.linalg.norm(st.joint) - 1) < 1e-12
        rho = reduced_density(st.joint, [0, 1], st.dims)
        r = B.conj().T @ rho @ B
        assert np.allclose(r, np.diag(np.abs(a.ravel()) ** 2), atol=1e-12)


def test_cerf_state_dimension_mismatch():
    with pytest.raises(ValueError):
        cerf_state(PEAK, bl.fourier_family(3))
    with pytest.raises(ValueError):
        check_amplitudes(2 * PEAK)


def test_joint_state_pairing_forms_coincide(rng):
    # conjugate-state pairing equals the B_{m,-n} pairing on the computational family
    a = random_amplitudes(4, rng)
    alt = sum(a[m, n] * np.kron(bl.fourier_bell(4, m, n), bl.fourier_bell(4, m, -n))
              for m, n in np.ndindex(4, 4))
    assert np.allclose(cerf_state(a, bl.fourier_family(4)).joint, alt, atol=1e-12)


def test_optimum_group_decomposition():
    # write a as c0 delta_00 + c_row [row 0] + c_col [column 0] + c_all [everything]
    E = np.zeros((4, 4, 4))
    E[0, 0, 0] = 1
    E[1, 0, :] = 1
    E[2, :, 0] = 1
    E[3] = 1
    coeffs, *_ = np.linalg.lstsq(E.reshape(4, -1).T, OPT.ravel(), rcond=None)
    assert np.allclose(np.tensordot(coeffs, E, axes=1), OPT, atol=1e-14)
    assert abs(coeffs[2] - (OPT[1, 0] - OPT[1, 1])) < 1e-12
    assert abs(coeffs[1] - coeffs[2]) < 1e-12
    assert abs(coeffs[3] - OPT[1, 1]) < 1e-12


def test_peaked_dual_is_flat():
    assert np.allclose(dual_amplitudes(PEAK, "fourier"), np.full((4, 4), 0.25), atol=1e-15)
    st = cerf_state(PEAK, bl.fourier_family(4))
    assert np.allclose(reexpand(st), np.full((4, 4), 0.25), atol=1e-12)


def test_dual_by_explicit_sums():
    a = OPT.astype(complex)
    H = hadamard_matrix()
    b_f = np.zeros((4, 4), dtype=complex)
    b_h = np.zeros((4, 4), dtype=complex)
    for m, n, x, y in np.ndindex(4, 4, 4, 4):
        b_f[m, n] += np.exp(2j * np.pi * (n * x - m * y) / 4) * a[x, y] / 4
        b_h[m, n] += H[m, y] * H[n, x] * a[x, y]
    assert np.allclose(dual_amplitudes(a, "fourier"), b_f, atol=1e-12)
    assert np.allclose(dual_amplitudes(a, "hadamard"), b_h, atol=1e-12)
    assert np.allclose(b_f, a, atol=1e-12)
    assert np.allclose(b_h, a, atol=1e-12)


@pytest.mark.parametrize("rule,N", [("fourier", 2), ("fourier", 3), ("fourier", 4), ("hadamard", 4)])
def test_reexpand_oracle(rng, rule, N):
    fam = bl.bell_family(rule, N=N)
    for _ in range(100):
        a = random_amplitudes(N, rng)
        assert np.allclose(reexpand(cerf_state(a, fam)), dual_amplitudes(a, rule), atol=1e-12)


def test_reexpand_rejects_non_cerf(rng):
    fam = bl.fourier_family(2)
    st = cerf_state(random_amplitudes(2, rng), fam)
    junk = rng.normal(size=16) + 0j
    junk /= np.linalg.norm(junk)
    with pytest.raises(ValueError):
        reexpand(type(st)(fam, st.a, junk))


def test_projection_perfect_channel():
    st = cerf_state(PEAK, bl.fourier_family(4))
    psi = np.eye(4)[2]
    want = np.kron(psi, bl.fourier_bell(4, 0, 0))
    assert np.allclose(project_reference(st, psi), want, atol=1e-12)


def test_projection_of_maximally_entangled_pair(rng):
    # <psi*|_1 |B_00> = |psi>/sqrt(N)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    out = np.tensordot(psi, bl.fourier_bell(4, 0, 0).reshape(4, 4), axes=(0, 0))
    assert np.allclose(out, psi / 2, atol=1e-12)


@pytest.mark.parametrize("rule", ["fourier", "hadamard"])
def test_projection_matches_expansion(rng, rule):
    fam = bl.bell_family(rule, N=4)
    for _ in range(20):
        a = random_amplitudes(4, rng)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        got = project_reference(cerf_state(a, fam), psi)
        want = resent_state(a, rule, psi)
        want /= np.linalg.norm(want)
        assert np.allclose(got, want, atol=1e-12)


def test_projection_zero_probability():
    st = cerf_state(PEAK, bl.fourier_family(4))
    with pytest.raises(ValueError):
        project_reference(st, np.zeros(4))


def test_projection_term_by_term(rng):
    # psi = |0>: amplitude <m|_A <bc| = (1/2) sum_n a_{m,n} <bc|B*_{m,n}>
    a = random_amplitudes(4, rng)
    st = cerf_state(a, bl.fourier_family(4))
    raw = np.tensordot(np.eye(4)[0], st.joint.reshape(4, 64), axes=(0, 0)).reshape(4, 16)
    for m in range(4):
        want = sum(a[m, n] * bl.fourier_bell(4, m, n).conj() for n in range(4)) / 2
        assert np.allclose(raw[m], want, atol=1e-12)


@pytest.mark.parametrize("rule", ["fourier", "hadamard"])
def test_densities_match_partial_trace(rng, rule):
    fam = bl.bell_family(rule, N=4)
    for _ in range(30):
        a = random_amplitudes(4, rng)
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        ra, rb = clone_densities(a, rule, psi)
        ta, tb = clone_densities_by_trace(cerf_state(a, fam), psi)
        assert np.allclose(ra, ta, atol=1e-12)
        assert np.allclose(rb, tb, atol=1e-12)
        for r in (ra, rb):
            assert abs(np.trace(r) - 1) < 1e-12
            assert np.allclose(r, r.conj().T, atol=1e-12)
            assert np.linalg.eigvalsh(r).min() > -1e-12


def test_densities_examples():
    psi = np.eye(4)[1]
    ra, rb = clone_densities(PEAK, "fourier", psi)
    assert np.allclose(ra, np.outer(psi, psi), atol=1e-12)
    assert np.allclose(rb, np.eye(4) / 4, atol=1e-12)
    ra, _ = clone_densities(OPT, "fourier", np.eye(4)[0])
    assert abs(ra[0, 0] - 0.75) < 1e-12


def test_fidelity_matches_density_diagonal(rng):
    for _ in range(20):
        a = random_amplitudes(4, rng)
        F, D = fidelity_and_disturbances(a)
        for k in range(4):
            ra, _ = clone_densities(a, "fourier", np.eye(4)[k])
            diag = np.real(np.diag(ra))
            assert abs(diag[k] - F) < 1e-12
            for i in range(1, 4):
                assert abs(diag[(k + i) % 4] - D[i - 1]) < 1e-12


def test_fidelity_examples():
    F, D = fidelity_and_disturbances(OPT)
    assert abs(F - 0.75) < 1e-12 and np.allclose(D, 1 / 12, atol=1e-12)
    F, D = fidelity_and_disturbances(PEAK)
    assert F == 1 and not D.any()


def test_hadamard_optimum_densities_diagonal_in_both_bases():
    H = hadamard_matrix()
    hb = hadamard_basis()
    for k in range(4):
        ra, rb = clone_densities(OPT, "hadamard", np.eye(4)[k])
        for r in (ra, rb):
            assert np.allclose(r - np.diag(np.diag(r)), 0, atol=1e-12)
        ra, rb = clone_densities(OPT, "hadamard", hb[k])
        for r in (ra, rb):
            rp = H @ r @ H
            assert np.allclose(rp - np.diag(np.diag(rp)), 0, atol=1e-12)


def test_entropy_examples():
    hp, hq = entropic_bound(PEAK)
    assert hp == 0 and abs(hq - 4) < 1e-12
    hp, hq = entropic_bound(np.full((4, 4), 0.25))
    assert abs(hp - 4) < 1e-12 and abs(hq) < 1e-12
    assert shannon_entropy([0.5, 0.5, 0.0]) == 1.0


def test_mutual_information_examples():
    assert abs(mutual_information(0.75, [1 / 12] * 3, 4) - 0.792) < 1e-3
    assert abs(mutual_information(1.0, [0, 0, 0], 4) - 2.0) < 1e-12
    assert abs(mutual_information(0.25, [0.25] * 3, 4)) < 1e-12
    with pytest.raises(ValueError):
        mutual_information(0.7, [0.2, 0.05, 0.05], 4)
    with pytest.raises(ValueError):
        mutual_information(0.7, [0.2, 0.2, 0.2], 4)


def test_clone_report_fields():
    rep = clone_report(OPT, "fourier")
    d = rep.to_dict()
    assert set(d) == {"F_A", "F_B", "D_A", "D_B", "H_p", "H_q", "I_AB", "I_AE",
                      "secure", "a_matrix", "b_matrix"}
    assert abs(rep.F_A - 0.75) < 1e-12 and abs(rep.F_B - 0.75) < 1e-12
    assert not rep.secure
    assert d["a_matrix"][0][0] == [0.75, 0.0]


def test_report_without_isotropy_has_no_information():
    a = np.diag([0.6, 0.6, 0.4, 0.0 + np.sqrt(1 - 0.88)])
    rep = clone_report(a)
    assert rep.I_AB is None and not rep.secure
