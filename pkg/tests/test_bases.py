import numpy as np
import pytest

from cloneforge.bases import (
    OrthonormalBasis,
    are_unbiased,
    computational_basis,
    cyclic_group,
    fourier_basis,
    hadamard_basis,
    hadamard_matrix,
    hadamard_sum,
    interferometric_bases,
    klein_group,
    overlap,
    row_group_check,
)


@pytest.mark.parametrize("N", [2, 3, 4, 5, 8])
def test_fourier_unbiased_with_computational(N):
    assert are_unbiased(computational_basis(N), fourier_basis(N))


def test_hadamard_unbiased_and_symmetric():
    H = hadamard_matrix()
    assert np.array_equal(H, H.T)
    assert np.allclose(H @ H, np.eye(4), atol=1e-15)
    assert are_unbiased(computational_basis(4), hadamard_basis())


def test_hadamard_and_fourier_not_unbiased():
    # both are unbiased to the computational basis, not to each other
    assert not are_unbiased(fourier_basis(4), hadamard_basis())


def test_interferometric_overlap_is_hadamard():
    u, p = interferometric_bases()
    assert np.allclose(overlap(u, p), hadamard_matrix(), atol=1e-15)


def test_non_orthonormal_rejected():
    with pytest.raises(ValueError):
        OrthonormalBasis(np.array([[1, 1], [0, 1]], dtype=complex))


def test_hadamard_sum_table():
    expect = {(1, 1): 0, (3, 3): 0, (1, 3): 2, (3, 1): 2, (1, 2): 3, (2, 3): 1, (2, 2): 0}
    for (i, j), k in expect.items():
        assert hadamard_sum(i, j) == k
    for i in range(4):
        for j in range(4):
            assert hadamard_sum(i, j) == klein_group().add(i, j)
    with pytest.raises(ValueError):
        hadamard_sum(4, 0)


def test_klein_group_self_inverse():
    g = klein_group()
    assert all(g.neg(i) == i for i in range(4))
    assert cyclic_group(4).neg(1) == 3


def test_row_group_checks():
    assert row_group_check(fourier_basis(4), cyclic_group(4))
    assert row_group_check(hadamard_basis(), klein_group())
    assert not row_group_check(hadamard_basis(), cyclic_group(4))
