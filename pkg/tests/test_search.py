import numpy as np
import pytest

from swstab import (
    ContractionError,
    MatrixFamily,
    StableCombination,
    assert_all_unstable,
    compute_contraction,
    find_stable_combination,
)
from swstab.search import _exponent_pairs


def test_assert_all_unstable_clean(diag_family):
    assert assert_all_unstable(diag_family) == []


def test_assert_all_unstable_flags_stable_members():
    fam = MatrixFamily((np.diag([1.2, 0.4]), np.diag([0.5, 0.5]), np.diag([2.0, 0.0])))
    assert assert_all_unstable(fam) == [2]


def test_compute_contraction_immediate():
    m, rho = compute_contraction(np.diag([0.48, 0.16]))
    assert m == 1
    assert rho == pytest.approx(0.48, abs=1e-14)


def test_compute_contraction_delayed_by_transient():
    # Jordan-type block: spectral radius 0.5 but a large transient bump.
    m, rho = compute_contraction(np.array([[0.5, 10.0], [0.0, 0.5]]))
    assert m == 8
    assert rho == pytest.approx(0.6250244131089002, abs=1e-12)


def test_compute_contraction_rejects_unstable_input():
    with pytest.raises(ValueError):
        compute_contraction(np.diag([1.5, 0.0]))


def test_compute_contraction_raises_past_cap():
    with pytest.raises(ContractionError):
        compute_contraction(np.array([[0.5, 1e6], [0.0, 0.5]]), m_max=10)


def test_exponent_pairs_order():
    pairs = list(_exponent_pairs(3, 3))
    assert pairs[:6] == [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)]
    assert pairs[-1] == (3, 3)
    assert len(pairs) == 9


def test_find_stable_combination_diagonal(diag_family):
    comb = find_stable_combination(diag_family)
    assert (comb.head, comb.tail) == (1, 2)
    assert (comb.head_power, comb.tail_power) == (1, 1)
    assert comb.contraction_power == 1
    assert comb.contraction_norm == pytest.approx(0.48, abs=1e-14)
    assert comb.block_duration == 2
    assert np.allclose(comb.product, np.diag([0.48, 0.48]))


def test_find_stable_combination_none_when_hopeless():
    fam = MatrixFamily((np.diag([2.0, 2.0]), np.diag([3.0, 3.0])))
    assert find_stable_combination(fam, p_max=4, q_max=4) is None


def test_find_stable_combination_shear(shear_family, shear_comb):
    assert (shear_comb.head, shear_comb.tail) == (1, 2)
    assert shear_comb.contraction_power == 3
    assert 0.0 < shear_comb.contraction_norm < 1.0


def test_find_stable_combination_rejects_bad_bounds(diag_family):
    with pytest.raises(ValueError):
        find_stable_combination(diag_family, p_max=0)


def test_stable_combination_validation():
    with pytest.raises(ValueError):
        StableCombination(
            head=1,
            tail=1,
            head_power=1,
            tail_power=1,
            product=np.diag([0.5, 0.5]),
            contraction_power=1,
            contraction_norm=0.5,
        )
    with pytest.raises(ValueError):
        StableCombination(
            head=1,
            tail=2,
            head_power=1,
            tail_power=1,
            product=np.diag([0.5, 0.5]),
            contraction_power=1,
            contraction_norm=1.5,
        )
