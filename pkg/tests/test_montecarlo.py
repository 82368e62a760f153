import numpy as np
import pytest
from scipy import stats

from fourthorder import _pykernels, kernels
from fourthorder.fock import canonical_pairs
from fourthorder.interference import (
    PAIRS_4,
    empirical_visibility,
    expected_coincidences,
    expected_singles,
    output_probabilities,
    simulate_counts,
)

compiled = pytest.mark.skipif(kernels.BACKEND != "cython", reason="extension not built")


def test_deterministic_given_seed():
    a = simulate_counts(1.0, 1.0, 0.1, 50_000, seed=7, single_photon_prob=0.3)
    b = simulate_counts(1.0, 1.0, 0.1, 50_000, seed=7, single_photon_prob=0.3)
    c = simulate_counts(1.0, 1.0, 0.1, 50_000, seed=8, single_photon_prob=0.3)
    assert a.same_counts(b)
    assert not a.same_counts(c)


def test_counts_consistent():
    rec = simulate_counts(0.6, 0.7, 0.2, 40_000, seed=3, single_photon_prob=0.3, dark_count_prob=0.01)
    assert np.all(rec.singles >= 0)
    for (j, k), c in rec.coincidences.items():
        assert 0 <= c <= min(rec.singles[j], rec.singles[k])
    assert rec.pair_events + rec.single_events <= rec.pulses


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        simulate_counts(1.0, 1.0, 0.1, 0, seed=1)
    with pytest.raises(ValueError):
        simulate_counts(1.0, 1.5, 0.1, 10, seed=1)
    with pytest.raises(ValueError):
        simulate_counts(1.0, 1.0, 0.8, 10, seed=1, single_photon_prob=0.5)
    with pytest.raises(ValueError):
        simulate_counts(1.0, 1.0, 0.1, 10, seed=None)


@compiled
def test_compiled_matches_python_kernel():
    rng = np.random.default_rng(11)
    n = 20_000
    ev, oc, dk = rng.random(n), rng.random(n), rng.random((n, 4))
    cum_pair = np.cumsum(output_probabilities(0.4, 0.8))
    cum_pair[-1] = 1.0
    cum_single = np.array([0.25, 0.5, 0.75, 1.0])
    pairs = np.array(canonical_pairs(4))
    args = (ev, oc, dk, 0.3, 0.2, cum_single, cum_pair, pairs, 0.02)
    fast = kernels.tally_pulses(*args)
    slow = _pykernels.tally_pulses(*args)
    np.testing.assert_array_equal(fast[0], slow[0])
    np.testing.assert_array_equal(fast[1], slow[1])
    assert fast[2:] == slow[2:]


@compiled
def test_compiled_two_photon_coefficients(rng):
    from conftest import haar_unitary
    for M in (2, 4, 6):
        U = haar_unitary(M, rng)
        pairs = np.array(canonical_pairs(M))
        np.testing.assert_allclose(kernels.two_photon_coefficients(U, pairs),
                                   _pykernels.two_photon_coefficients(U, pairs), atol=1e-15)


def test_pair_only_chi_square():
    """Coincidence tallies follow the analytic multinomial (pooled over seeds)."""
    g, f, pulses = 0.5, 0.8, 20_000
    probs = output_probabilities(g, f)
    pair_p = np.array([probs[canonical_pairs(4).index(p)] for p in PAIRS_4])
    expected = np.append(pair_p, 1 - pair_p.sum()) * pulses
    chi2, dof = 0.0, 0
    for seed in range(10):
        rec = simulate_counts(g, f, 1.0, pulses, seed=seed)
        obs = np.array([rec.coincidences[p] for p in PAIRS_4])
        obs = np.append(obs, pulses - obs.sum())
        chi2 += float(np.sum((obs - expected) ** 2 / expected))
        dof += len(obs) - 1
    assert stats.chi2.sf(chi2, dof) > 0.01


def test_expected_coincidences_mean():
    g, f, p, pulses = 1.0, 1.0, 0.1, 200_000
    rec = simulate_counts(g, f, p, pulses, seed=99)
    exp = expected_coincidences(g, f, p, pulses)
    for pair in PAIRS_4:
        assert abs(rec.coincidences[pair] - exp[pair]) <= 5 * np.sqrt(exp[pair])


def test_expected_singles_independent_of_overlap():
    base = expected_singles(0.4, 0.1, 1000, single_photon_prob=0.2)
    # per-mode photon number from two-photon events for any overlap
    for f in np.linspace(0, 1, 5):
        probs = output_probabilities(0.4, f)
        per_mode = np.zeros(4)
        for q, (j, k) in zip(probs, canonical_pairs(4)):
            per_mode[j] += q
            per_mode[k] += q
        lone = expected_singles(0.4, 0.0, 1000, single_photon_prob=0.2)
        np.testing.assert_allclose(lone + 1000 * 0.1 * per_mode, base, atol=1e-9)


def test_dark_counts_only():
    p, pulses = 0.05, 100_000
    rec = simulate_counts(1.0, 1.0, 0.0, pulses, seed=5, dark_count_prob=p)
    for s in rec.singles:
        assert abs(s - pulses * p) <= 5 * np.sqrt(pulses * p)
    for c in rec.coincidences.values():
        assert abs(c - pulses * p * p) <= 5 * np.sqrt(pulses * p * p)


def test_visibility_close_to_half():
    rec = simulate_counts(1.0, 1.0, 0.1, 300_000, seed=21)
    assert empirical_visibility(rec) == pytest.approx(0.5, abs=0.03)
    flat = simulate_counts(1.0, 0.0, 0.1, 300_000, seed=22)
    assert abs(empirical_visibility(flat)) <= 0.03


def test_chunking_covers_all_pulses(monkeypatch):
    from fourthorder import interference
    monkeypatch.setattr(interference, "_MC_CHUNK", 1000)
    rec = simulate_counts(1.0, 1.0, 1.0, 2500, seed=4)
    assert rec.pair_events == 2500
    assert rec.singles.sum() == 5000
