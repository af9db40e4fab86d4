import math

import numpy as np
import pytest

from swstab import (
    build_graph,
    fit_decay,
    product_norms,
    simulate,
    verify_ges,
    walk_to_signal,
)
from swstab.graph import SwitchingSignal


def _signal(diag_comb, walk):
    return walk_to_signal(build_graph(2), walk, diag_comb)


def test_simulate_matches_manual_recursion(diag_family, diag_comb):
    sig = _signal(diag_comb, [1, 3, 2, 3, 1])
    x0 = np.array([1.0, -2.0])
    traj = simulate(diag_family, sig, x0, sig.duration)
    x = x0.copy()
    for t in range(sig.duration):
        x = diag_family.matrix(sig.index_at(t)) @ x
        assert np.array_equal(traj.states[t + 1], x)
    assert traj.horizon == sig.duration
    assert traj.norms[0] == pytest.approx(np.linalg.norm(x0))


def test_simulate_rejects_bad_horizon(diag_family, diag_comb):
    sig = _signal(diag_comb, [1, 3])
    with pytest.raises(ValueError):
        simulate(diag_family, sig, [1.0, 1.0], sig.duration + 1)
    with pytest.raises(ValueError):
        simulate(diag_family, sig, [1.0, 1.0], -1)


def test_product_norms_start_at_one_and_bound_states(diag_family, diag_comb):
    sig = _signal(diag_comb, [1, 3, 2, 3, 1, 3])
    norms = product_norms(diag_family, sig, sig.duration)
    assert norms[0] == 1.0
    x0 = np.array([0.3, 0.7])
    traj = simulate(diag_family, sig, x0, sig.duration)
    # the product norm dominates every trajectory from the unit ball
    assert np.all(traj.norms <= norms * np.linalg.norm(x0) + 1e-12)


def test_verify_ges_detects_violation():
    good = [1.0, 0.5, 0.25, 0.125]
    check = verify_ges(good, c=1.0, rate=math.log(2.0))
    assert check.holds
    bad = [1.0, 0.5, 0.6, 0.125]
    check = verify_ges(bad, c=1.0, rate=math.log(2.0))
    assert not check.holds
    assert check.worst_t == 2
    assert check.worst_margin == pytest.approx(0.25 - 0.6, abs=1e-12)


def test_verify_ges_validates_inputs():
    with pytest.raises(ValueError):
        verify_ges([1.0, 0.5], c=0.0, rate=0.1)
    with pytest.raises(ValueError):
        verify_ges([1.0], c=1.0, rate=0.1)


def test_fit_decay_recovers_exact_exponential():
    rate, amp = 0.25, 3.0
    norms = amp * np.exp(-rate * np.arange(50))
    fit = fit_decay(norms)
    assert fit.rate == pytest.approx(rate, abs=1e-10)
    assert fit.amplitude == pytest.approx(amp, rel=1e-10)


def test_fit_decay_drops_underflowed_entries():
    norms = np.array([1.0, 0.5, 0.0, 0.25])
    fit = fit_decay(norms)
    assert math.isfinite(fit.rate)
    with pytest.raises(ValueError):
        fit_decay([1.0, 0.0, 0.0])


def test_periodic_stable_walk_decays(diag_family, diag_comb):
    # hub-only schedule contracts by rho per block
    sig = SwitchingSignal(((2, 1), (1, 1)) * 30)
    traj = simulate(diag_family, sig, [1.0, 1.0], 60)
    fit = fit_decay(traj.norms)
    assert fit.rate == pytest.approx(-math.log(0.48) / 2.0, abs=1e-6)
