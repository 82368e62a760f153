"""Acceptance criteria, one test each. A PASS/FAIL line per criterion is printed in the summary."""
import time
import timeit

import numpy as np
import pytest

from fourthorder.correlations import (
    BELL_STATES,
    BipartiteQubitState,
    bell_decomposition,
    geometric_discord_closed,
    geometric_discord_general,
    maximize_discord,
    postselect_bipartite,
    purity,
)
from fourthorder.fock import TransferMatrix, TwoPhotonDensityMatrix, transform_density_matrix
from fourthorder.interference import (
    PAIRS_4,
    coincidence_table,
    empirical_visibility,
    engine_output_density_matrix,
    expected_singles,
    fit_sinusoid,
    harmonic_power,
    hom_visibility,
    output_density_matrix,
    simulate_counts,
    two_photon_fringe,
    two_photon_subblock,
)
from fourthorder.noise import NoiseParams, discord_vs_coherence_curve, noisy_sweep

from conftest import haar_unitary, random_density

S2 = np.sqrt(2)
# literal 10x10 matrix at equal intensities (times 16)
EQUAL_INTENSITY_OUTPUT = np.array([
    [3 / 2, -1 / 2, 3 / 2, -1 / 2, 0, -3 / S2, 0, 0, 1 / S2, 0],
    [-1 / 2, 3 / 2, -1 / 2, 3 / 2, 0, 1 / S2, 0, 0, -3 / S2, 0],
    [3 / 2, -1 / 2, 3 / 2, -1 / 2, 0, -3 / S2, 0, 0, 1 / S2, 0],
    [-1 / 2, 3 / 2, -1 / 2, 3 / 2, 0, 1 / S2, 0, 0, -3 / S2, 0],
    [0, 0, 0, 0, 1, 0, -1, -1, 0, 1],
    [-3 / S2, 1 / S2, -3 / S2, 1 / S2, 0, 3, 0, 0, -1, 0],
    [0, 0, 0, 0, -1, 0, 1, 1, 0, -1],
    [0, 0, 0, 0, -1, 0, 1, 1, 0, -1],
    [1 / S2, -3 / S2, 1 / S2, -3 / S2, 0, -1, 0, 0, 3, 0],
    [0, 0, 0, 0, 1, 0, -1, -1, 0, 1],
]) / 16


def assert_density(m, tol=1e-12):
    assert np.max(np.abs(m - m.conj().T)) <= tol
    assert abs(np.trace(m) - 1) <= tol
    assert np.linalg.eigvalsh(m)[0] >= -1e-10


def test_criterion_01_equal_intensity_output_matrix():
    rho = output_density_matrix(1.0).matrix
    assert np.max(np.abs(rho - EQUAL_INTENSITY_OUTPUT)) <= 1e-12
    runtime = min(timeit.repeat(lambda: output_density_matrix(1.0), number=1, repeat=20))
    assert runtime < 1e-3


def test_criterion_02_dual_path_oracle():
    gammas = np.random.default_rng(2).uniform(0, 1, 20)
    t0 = time.perf_counter()
    worst = max(np.max(np.abs(output_density_matrix(g).matrix - engine_output_density_matrix(g).matrix))
                for g in gammas)
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-12
    assert elapsed < 1.0


def test_criterion_03_coincidence_table():
    on = coincidence_table(1.0, indistinguishable=True)
    for p in PAIRS_4:
        want = 3 / 16 if p in {(0, 2), (1, 3)} else 1 / 16
        assert on[p] == pytest.approx(want, abs=1e-15)
    off = coincidence_table(1.0, indistinguishable=False)
    for p in PAIRS_4:
        assert off[p] == pytest.approx(1 / 8, abs=1e-15)
    assert hom_visibility(1.0) == pytest.approx(0.5, abs=1e-15)


def test_criterion_04_monte_carlo():
    pulses, p_pair, seed = 1_000_000, 0.1, 2024
    f_grid = np.linspace(0, 1, 11)
    t0 = time.perf_counter()
    recs = [simulate_counts(1.0, f, p_pair, pulses, seed + i) for i, f in enumerate(f_grid)]
    elapsed = time.perf_counter() - t0
    assert empirical_visibility(recs[-1]) == pytest.approx(0.5, abs=0.02)
    mean = expected_singles(1.0, p_pair, pulses)
    for r in recs:
        assert np.all(np.abs(r.singles - mean) <= 3 * np.sqrt(mean))
    assert elapsed < 30.0


def test_criterion_05_two_photon_fringe():
    phases = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    curve = two_photon_fringe(1.0, (0, 1), phases)
    power = harmonic_power(curve.values)
    assert np.max(np.delete(power, [0, 2])) <= 1e-10 * power[2]

    wide = np.linspace(0, 4 * np.pi, 400)
    both = two_photon_fringe(1.0, (0, 1), wide)
    ratio = fit_sinusoid(wide, both.values).frequency / fit_sinusoid(wide, both.single).frequency
    assert ratio == pytest.approx(2.0, abs=0.01)

    block = two_photon_subblock(1.0, (0, 1))
    oracle = []
    for phi in phases:
        alpha = np.array([1 / S2, 0, -np.exp(2j * phi) / S2])
        oracle.append(np.real(alpha @ block @ alpha.conj()))
    oracle = np.array(oracle)
    np.testing.assert_allclose(curve.values, oracle, atol=1e-14)
    oracle_ratio = (oracle.max() - oracle.min()) / 2 / oracle.mean()
    assert curve.modulation_ratio() == pytest.approx(1 / 3, abs=1e-6)
    assert oracle_ratio == pytest.approx(1 / 3, abs=1e-6)


def test_criterion_06_postselection():
    st = postselect_bipartite(output_density_matrix(1.0))
    want = np.array([[3, 0, 0, -1], [0, 1, 1, 0], [0, 1, 1, 0], [-1, 0, 0, 3]]) / 8
    np.testing.assert_allclose(st.matrix, want, atol=1e-15)
    weights, diagonal = bell_decomposition(st)
    assert diagonal
    np.testing.assert_allclose([weights[k] for k in ("phi+", "phi-", "psi+", "psi-")],
                               [0.25, 0.5, 0.25, 0.0], atol=1e-15)
    for g in np.concatenate([[0, 0.435, 1, 2], np.random.default_rng(6).uniform(0, 1, 20)]):
        assert postselect_bipartite(output_density_matrix(g)).success_probability == pytest.approx(0.5, abs=1e-12)


def test_criterion_07_scalar_targets():
    assert purity(BipartiteQubitState.from_gamma(1.0)) == pytest.approx(3 / 8, abs=1e-15)
    assert purity(BipartiteQubitState.from_gamma(0.0)) == pytest.approx(1.0, abs=1e-15)
    assert geometric_discord_closed(1.0) == pytest.approx(0.125, abs=1e-12)
    assert geometric_discord_general(BipartiteQubitState.from_gamma(1.0)) == pytest.approx(0.125, abs=1e-12)
    for psi in BELL_STATES.values():
        assert geometric_discord_general(BipartiteQubitState.from_pure(psi)) == pytest.approx(1.0, abs=1e-12)
    plus_plus = BipartiteQubitState.from_pure(np.full(4, 0.5))
    assert geometric_discord_general(plus_plus) == pytest.approx(0.0, abs=1e-14)


def test_criterion_08_discord_optimum():
    t0 = time.perf_counter()
    res = maximize_discord()
    elapsed = time.perf_counter() - t0
    assert res.gamma_star == pytest.approx(0.435, abs=0.001)
    assert res.d_star == pytest.approx(0.178, abs=0.002)
    assert abs(res.kink_gamma - res.gamma_star) <= 1e-3
    assert elapsed < 1.0


def test_criterion_09_property_suites():
    rng = np.random.default_rng(9)
    for M in (2, 3, 4, 5):
        for _ in range(10):
            U, V = TransferMatrix(haar_unitary(M, rng)), TransferMatrix(haar_unitary(M, rng))
            r1, r2 = random_density(M, rng), random_density(M, rng, rank=1)
            out = transform_density_matrix(U, r1)
            assert_density(out.matrix)
            # composition
            two_step = transform_density_matrix(V, transform_density_matrix(U, r1))
            np.testing.assert_allclose(two_step.matrix, transform_density_matrix(V @ U, r1).matrix, atol=1e-12)
            # linearity over convex mixtures
            w = rng.uniform()
            mix = TwoPhotonDensityMatrix(M, w * r1.matrix + (1 - w) * r2.matrix)
            np.testing.assert_allclose(
                transform_density_matrix(U, mix).matrix,
                w * out.matrix + (1 - w) * transform_density_matrix(U, r2).matrix, atol=1e-12)
    for g in rng.uniform(0, 3, 25):
        assert_density(output_density_matrix(g).matrix)
        assert_density(postselect_bipartite(output_density_matrix(g)).matrix)
    for g in rng.uniform(0, 1, 25):
        st = BipartiteQubitState.from_gamma(g)
        d = geometric_discord_general(st)
        assert d == pytest.approx(geometric_discord_closed(g), abs=1e-10)
        L = np.kron(haar_unitary(2, rng), haar_unitary(2, rng))
        assert geometric_discord_general(BipartiteQubitState(L @ st.matrix @ L.conj().T)) == pytest.approx(d, abs=1e-10)


def test_criterion_10_noise_model():
    ends = discord_vs_coherence_curve(NoiseParams(), [1.0, 0.0])
    assert ends[0] == pytest.approx((0.0, 0.125), abs=1e-12)
    assert ends[1] == pytest.approx((1.0, 0.0), abs=1e-12)
    grid = np.linspace(0, 1, 200)
    for lam, vis in [(0.9, 1.0), (0.5, 1.0), (1.0, 0.96), (1.0, 0.5), (0.8, 0.9), (0.0, 0.0)]:
        cols = noisy_sweep(NoiseParams(lam, vis), grid)
        assert np.all(cols["discord_noisy"] <= cols["discord_ideal"] + 1e-12)
