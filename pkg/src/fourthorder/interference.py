"""Output statistics of two weak coherent states at the 4x4 splitter.

Covers the closed-form 10x10 output state, coincidence tables with partial
distinguishability, the two-photon sub-block and its phase fringe, and a
seeded Monte Carlo of detector tallies.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from . import kernels
from .fock import (
    TransferMatrix,
    TwoPhotonDensityMatrix,
    b4_matrix,
    basis_index,
    canonical_pairs,
    dimension,
    transform_density_matrix,
    two_photon_unitary,
)
from .sources import DEFAULT_INPUT_MODES, WcsPair, build_input_state, input_weights

M4 = 4
PAIRS_4 = tuple((j, k) for j in range(M4) for k in range(j + 1, M4))
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
_MC_CHUNK = 1 << 20


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma < 0:
        raise ValueError(f"gamma must be finite and >= 0, got {gamma}")
    return gamma


def _check_f(f: float) -> float:
    f = float(f)
    if not 0.0 <= f <= 1.0:
        raise ValueError(f"distinguishability overlap must lie in [0, 1], got {f}")
    return f


@dataclass(frozen=True)
class OutputCoefficients:
    a: float
    b: float
    c: float
    d: float
    norm: float

    @classmethod
    def at(cls, gamma: float) -> "OutputCoefficients":
        g = _check_gamma(gamma)
        n = 1.0 + 2.0 * g + g * g
        return cls(a=(2 + 8 * g + 2 * g * g) / n,
                   b=(2 - 2 * g * g) / n,
                   c=(2 - 8 * g + 2 * g * g) / n,
                   d=(2 + 2 * g * g) / n,
                   norm=n)


def output_density_matrix(gamma: float) -> TwoPhotonDensityMatrix:
    """Closed-form output state for inputs in modes 1 and 3 of the 4x4 splitter.

    Entry (row ``11_02``, column ``2_0``) is ``-a/sqrt(2)``, the Hermitian
    partner of (``2_0``, ``11_02``).
    """
    k = OutputCoefficients.at(gamma)
    a, b, c, d = k.a, k.b, k.c, k.d
    s = np.sqrt(2.0)
    rows = [
        [a / 2, c / 2, a / 2, c / 2, b / s, -a / s, -b / s, -b / s, -c / s, b / s],
        [c / 2, a / 2, c / 2, a / 2, b / s, -c / s, -b / s, -b / s, -a / s, b / s],
        [a / 2, c / 2, a / 2, c / 2, b / s, -a / s, -b / s, -b / s, -c / s, b / s],
        [c / 2, a / 2, c / 2, a / 2, b / s, -c / s, -b / s, -b / s, -a / s, b / s],
        [b / s, b / s, b / s, b / s, d, -b, -d, -d, -b, d],
        [-a / s, -c / s, -a / s, -c / s, -b, a, b, b, c, -b],
        [-b / s, -b / s, -b / s, -b / s, -d, b, d, d, b, -d],
        [-b / s, -b / s, -b / s, -b / s, -d, b, d, d, b, -d],
        [-c / s, -a / s, -c / s, -a / s, -b, c, b, b, a, -b],
        [b / s, b / s, b / s, b / s, d, -b, -d, -d, -b, d],
    ]
    return TwoPhotonDensityMatrix(M4, np.array(rows) / 16.0)


def engine_output_density_matrix(gamma: float, U: TransferMatrix | None = None,
                                 input_modes: tuple[int, int] = DEFAULT_INPUT_MODES
                                 ) -> TwoPhotonDensityMatrix:
    """Same state as :func:`output_density_matrix`, derived by evolving the input."""
    U = b4_matrix() if U is None else U
    rho_in = build_input_state(WcsPair(_check_gamma(gamma), input_modes), m=U.m)
    return transform_density_matrix(U, rho_in)


# ---------------------------------------------------------------------------
# detection probabilities with partial distinguishability
# ---------------------------------------------------------------------------

def _distinguishable_pair_probs(U: np.ndarray, j: int, k: int) -> np.ndarray:
    """Output distribution of one photon from ``j`` and one from ``k`` that never interfere."""
    M = U.shape[0]
    pj = np.abs(U[:, j]) ** 2
    pk = np.abs(U[:, k]) ** 2
    out = np.empty(dimension(M))
    for r, (m, n) in enumerate(canonical_pairs(M)):
        out[r] = pj[m] * pk[m] if m == n else pj[m] * pk[n] + pj[n] * pk[m]
    return out


def output_probabilities(gamma: float, f: float = 1.0, U: TransferMatrix | None = None,
                         input_modes: tuple[int, int] = DEFAULT_INPUT_MODES) -> np.ndarray:
    """Probability of each two-photon detection pattern (canonical order).

    ``f`` is the overlap of the internal (polarisation) states of photons from
    the two sources: the cross-source component is ``f`` parts interfering and
    ``1 - f`` parts distinguishable. Photons from the same source always
    interfere, so only that component depends on ``f``.
    """
    gamma, f = _check_gamma(gamma), _check_f(f)
    U = b4_matrix() if U is None else U
    a, b = input_modes
    w20, w02, w11 = input_weights(gamma)
    S = two_photon_unitary(U)
    M = U.m
    amp = lambda col: np.abs(S[:, basis_index(M, col)]) ** 2  # noqa: E731
    p_same = w20 * amp((a, a)) + w02 * amp((b, b))
    p_ind = amp((a, b))
    p_dist = _distinguishable_pair_probs(U.entries, a, b)
    return p_same + w11 * (f * p_ind + (1.0 - f) * p_dist)


@dataclass(frozen=True)
class CoincidenceTable:
    """``pairs[(j, k)]`` for ``j < k`` and ``doubles[j]`` (both photons in ``j``)."""

    pairs: dict[tuple[int, int], float]
    doubles: dict[int, float]

    def total(self) -> float:
        return sum(self.pairs.values()) + sum(self.doubles.values())

    def __getitem__(self, pair: tuple[int, int]) -> float:
        return self.pairs[tuple(sorted(pair))]


def _table_from_probs(probs: np.ndarray, M: int = M4) -> CoincidenceTable:
    pairs, doubles = {}, {}
    for p, (j, k) in zip(probs.tolist(), canonical_pairs(M)):
        if j == k:
            doubles[j] = p
        else:
            pairs[(j, k)] = p
    return CoincidenceTable(pairs, doubles)


def coincidence_table(gamma: float, indistinguishable: bool = True) -> CoincidenceTable:
    """Detection-pattern probabilities for the 4x4 splitter.

    Indistinguishable photons read the diagonal of the closed-form output
    state; otherwise the cross-source interference is switched off.
    """
    if indistinguishable:
        probs = np.real(np.diag(output_density_matrix(gamma).matrix))
    else:
        probs = output_probabilities(gamma, f=0.0)
    return _table_from_probs(probs)


def constructive_pairs(gamma: float = 1.0) -> list[tuple[int, int]]:
    """Pairs whose coincidence rate rises when the photons become indistinguishable."""
    on = coincidence_table(gamma, True).pairs
    off = coincidence_table(gamma, False).pairs
    return [p for p in PAIRS_4 if on[p] > off[p] + 1e-15]


def distinguishability_sweep(gamma: float, f_values: Iterable[float]) -> dict[tuple[int, int], np.ndarray]:
    """Coincidence probability of every output pair as a function of overlap ``f``."""
    fs = [_check_f(f) for f in f_values]
    rows = np.array([output_probabilities(gamma, f) for f in fs]).reshape(len(fs), -1)
    idx = {p: basis_index(M4, p) for p in PAIRS_4}
    return {p: rows[:, i].copy() for p, i in idx.items()}


def hom_visibility(gamma: float = 1.0) -> float:
    """``(mean constructive - mean destructive) / (sum)`` at full overlap."""
    table = coincidence_table(gamma, True).pairs
    con = constructive_pairs(gamma)
    if not con:
        return 0.0
    des = [p for p in PAIRS_4 if p not in con]
    hi = np.mean([table[p] for p in con])
    lo = np.mean([table[p] for p in des])
    return float((hi - lo) / (hi + lo))


# ---------------------------------------------------------------------------
# two-photon sub-block and its fringe
# ---------------------------------------------------------------------------

def two_photon_subblock(gamma: float, pair: tuple[int, int], normalize: bool = True,
                        rho: TwoPhotonDensityMatrix | None = None) -> np.ndarray:
    """Restriction of the output state to ``{|2>_j, |11>_jk, |2>_k}``."""
    j, k = int(pair[0]), int(pair[1])
    if j == k or not (0 <= j < M4 and 0 <= k < M4):
        raise ValueError(f"invalid mode pair {pair}")
    rho = output_density_matrix(gamma) if rho is None else rho
    idx = [basis_index(rho.m, (j, j)), basis_index(rho.m, (j, k)), basis_index(rho.m, (k, k))]
    block = rho.matrix[np.ix_(idx, idx)].copy()
    if normalize:
        tr = np.trace(block).real
        if tr <= 0:
            raise ValueError(f"no two-photon population in modes {pair}")
        block /= tr
    return block


def _phase_splitter(phi: float) -> TransferMatrix:
    return TransferMatrix(HADAMARD @ np.diag([1.0, np.exp(1j * phi)]))


def _block_to_two_mode(block: np.ndarray) -> TwoPhotonDensityMatrix:
    # {|2>_j, |11>, |2>_k} -> canonical M=2 order {|2,0>, |0,2>, |1,1>}
    perm = [0, 2, 1]
    return TwoPhotonDensityMatrix(2, block[np.ix_(perm, perm)], validate=False)


@dataclass
class FringeCurve:
    """Coincidence fringe of a two-photon sub-block behind a phase + 50:50 splitter.

    ``values`` is the two-photon coincidence probability (frequency 2 in the
    phase), ``single`` the reference one-photon fringe (frequency 1).
    """

    phases: np.ndarray
    values: np.ndarray
    single: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (len(self.phases) == len(self.values) == len(self.single)):
            raise ValueError("phases and values must have equal lengths")

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    def visibility(self) -> float:
        hi, lo = float(np.max(self.values)), float(np.min(self.values))
        return (hi - lo) / (hi + lo) if hi + lo > 0 else 0.0

    def visibility_offset_convention(self) -> float:
        """``(mean - amplitude) / (mean + amplitude)`` from a sinusoid fit.

        Applied to ``3/4 + 1/4 cos 2phi`` this gives 1/2, whereas the usual
        ``(max - min) / (max + min)`` gives 1/3.
        """
        fit = fit_sinusoid(self.phases, self.values)
        return (fit.offset - fit.amplitude) / (fit.offset + fit.amplitude)

    def modulation_ratio(self) -> float:
        fit = fit_sinusoid(self.phases, self.values)
        return fit.amplitude / fit.offset


def two_photon_fringe(gamma: float, pair: tuple[int, int], phases: Sequence[float],
                      single_photon_contrast: float = 0.2,
                      zero_coherence: bool = False) -> FringeCurve:
    """Coincidence probability after phase ``e^{i phi}`` on ``k`` and a 50:50 splitter.

    The two-photon state is the normalised sub-block of the output state on
    modes ``pair``. ``single_photon_contrast`` sets the coherence of a
    one-photon reference state in the same two modes, whose detector-0
    probability is returned as ``single``. ``zero_coherence`` removes the
    ``|2>_j <-> |2>_k`` coherence (diagnostic: flat fringe).
    """
    phases = np.asarray(list(phases), dtype=float)
    if not np.all(np.isfinite(phases)):
        raise ValueError("phases must be finite")
    if not 0.0 <= single_photon_contrast <= 1.0:
        raise ValueError("single_photon_contrast must lie in [0, 1]")
    block = two_photon_subblock(gamma, pair)
    if zero_coherence:
        block[0, 2] = block[2, 0] = 0.0
    rho2 = _block_to_two_mode(block)
    rho1 = 0.5 * np.array([[1.0, single_photon_contrast], [single_photon_contrast, 1.0]])
    coinc = basis_index(2, (0, 1))
    two, one = np.empty(len(phases)), np.empty(len(phases))
    for i, phi in enumerate(phases):
        T = _phase_splitter(phi)
        S = two_photon_unitary(T)
        two[i] = np.real(S @ rho2.matrix @ S.conj().T)[coinc, coinc]
        one[i] = np.real(T.entries @ rho1 @ T.entries.conj().T)[0, 0]
    return FringeCurve(phases, two, one,
                       meta={"gamma": float(gamma), "pair": tuple(pair),
                             "single_photon_contrast": single_photon_contrast,
                             "zero_coherence": zero_coherence})


@dataclass(frozen=True)
class SinusoidFit:
    frequency: float
    offset: float
    amplitude: float
    phase: float


def fit_sinusoid(x: Sequence[float], y: Sequence[float]) -> SinusoidFit:
    """Least-squares fit of ``offset + amplitude cos(frequency x + phase)``.

    Starting frequency from the strongest non-DC bin of a zero-padded DFT.
    A flat curve returns frequency 0 and amplitude 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    offset = float(np.mean(y))
    resid = y - offset
    if np.max(np.abs(resid), initial=0.0) < 1e-14:
        return SinusoidFit(0.0, offset, 0.0, 0.0)
    span = x[-1] - x[0]
    pad = 16 * len(x)
    amp = np.abs(np.fft.rfft(resid, n=pad))
    freqs = 2 * np.pi * np.fft.rfftfreq(pad, d=span / (len(x) - 1))
    w0 = float(freqs[1 + np.argmax(amp[1:])])
    proj = np.exp(-1j * w0 * x) @ resid
    a0 = 2 * abs(proj) / len(x)
    p0 = -np.angle(proj)

    def model(t, w, c, a, p):
        return c + a * np.cos(w * t + p)

    with warnings.catch_warnings():
        # exact fits have no residual, hence no covariance estimate
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(model, x, y, p0=[w0, offset, a0, p0], maxfev=20000)
    w, c, a, p = (float(v) for v in popt)
    if a < 0:
        a, p = -a, p + np.pi
    if w < 0:
        w, p = -w, -p
    return SinusoidFit(w, c, a, float(np.angle(np.exp(1j * p))))


def harmonic_power(values: Sequence[float]) -> np.ndarray:
    """Power per integer harmonic for samples on a uniform grid over one ``2 pi`` period."""
    v = np.asarray(values, dtype=float)
    return np.abs(np.fft.rfft(v)) ** 2 / len(v) ** 2


# ---------------------------------------------------------------------------
# Monte Carlo detector tallies
# ---------------------------------------------------------------------------

@dataclass
class CountRecord:
    """Simulated singles and coincidence tallies for one setting."""

    seed: int
    pulses: int
    gamma: float
    f: float
    mean_pairs_per_pulse: float
    singles: np.ndarray
    coincidences: dict[tuple[int, int], int]
    single_photon_prob: float = 0.0
    dark_count_prob: float = 0.0
    window_ns: float = 1.0
    pair_events: int = 0
    single_events: int = 0
    backend: str = kernels.BACKEND

    def __post_init__(self):
        if np.any(np.asarray(self.singles) < 0) or any(v < 0 for v in self.coincidences.values()):
            raise ValueError("counts must be non-negative")

    def same_counts(self, other: "CountRecord") -> bool:
        return (np.array_equal(self.singles, other.singles)
                and self.coincidences == other.coincidences
                and self.pair_events == other.pair_events
                and self.single_events == other.single_events)

    def to_json(self) -> dict:
        return {
            "seed": self.seed, "pulses": self.pulses, "gamma": self.gamma, "f": self.f,
            "mean_pairs_per_pulse": self.mean_pairs_per_pulse,
            "single_photon_prob": self.single_photon_prob,
            "dark_count_prob": self.dark_count_prob, "window_ns": self.window_ns,
            "singles": [int(s) for s in self.singles],
            "coincidences": {f"{j}{k}": int(v) for (j, k), v in self.coincidences.items()},
            "pair_events": self.pair_events, "single_events": self.single_events,
        }


def single_photon_output_probs(gamma: float, U: TransferMatrix | None = None,
                               input_modes: tuple[int, int] = DEFAULT_INPUT_MODES) -> np.ndarray:
    """Output-mode distribution of a lone photon; the second source is ``gamma`` times brighter."""
    gamma = _check_gamma(gamma)
    U = b4_matrix() if U is None else U
    a, b = input_modes
    e = U.entries
    return (np.abs(e[:, a]) ** 2 + gamma * np.abs(e[:, b]) ** 2) / (1.0 + gamma)


def _cumulative(p: np.ndarray) -> np.ndarray:
    c = np.cumsum(p)
    c[-1] = 1.0
    return c


def simulate_counts(gamma: float, f: float, mean_pairs_per_pulse: float, pulses: int,
                    seed: int, *, single_photon_prob: float = 0.0,
                    dark_count_prob: float = 0.0, window_ns: float = 1.0) -> CountRecord:
    """Tally detector clicks over ``pulses`` independent pulses.

    Each pulse carries one two-photon event with probability
    ``mean_pairs_per_pulse``, otherwise one photon with probability
    ``single_photon_prob``, otherwise nothing. Detectors are ideal and
    photon-number resolving, so ``singles`` counts photons; a coincidence
    ``(j, k)`` is a pulse where both ``j`` and ``k`` fire. Dark clicks are
    independent per detector per pulse.
    """
    gamma, f = _check_gamma(gamma), _check_f(f)
    if int(pulses) != pulses or pulses < 1:
        raise ValueError(f"pulses must be a positive integer, got {pulses}")
    if seed is None:
        raise ValueError("a seed is required")
    for name, p in (("mean_pairs_per_pulse", mean_pairs_per_pulse),
                    ("single_photon_prob", single_photon_prob),
                    ("dark_count_prob", dark_count_prob)):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {p}")
    if mean_pairs_per_pulse + single_photon_prob > 1.0:
        raise ValueError("event probabilities exceed 1")

    pulses = int(pulses)
    cum_pair = _cumulative(output_probabilities(gamma, f))
    cum_single = _cumulative(single_photon_output_probs(gamma))
    pairs = np.array(canonical_pairs(M4))
    rng = np.random.default_rng(int(seed))

    singles = np.zeros(M4, dtype=np.int64)
    coinc = np.zeros((M4, M4), dtype=np.int64)
    n_one = n_two = 0
    done = 0
    while done < pulses:
        n = min(_MC_CHUNK, pulses - done)
        ev = rng.random(n)
        oc = rng.random(n)
        dk = rng.random((n, M4)) if dark_count_prob > 0 else None
        s, c, k1, k2 = kernels.tally_pulses(ev, oc, dk, single_photon_prob, mean_pairs_per_pulse,
                                            cum_single, cum_pair, pairs, dark_count_prob)
        singles += s
        coinc += c
        n_one += int(k1)
        n_two += int(k2)
        done += n

    return CountRecord(
        seed=int(seed), pulses=pulses, gamma=gamma, f=f,
        mean_pairs_per_pulse=mean_pairs_per_pulse, singles=singles,
        coincidences={p: int(coinc[p]) for p in PAIRS_4},
        single_photon_prob=single_photon_prob, dark_count_prob=dark_count_prob,
        window_ns=window_ns, pair_events=n_two, single_events=n_one,
    )


def expected_coincidences(gamma: float, f: float, mean_pairs_per_pulse: float,
                          pulses: int) -> dict[tuple[int, int], float]:
    probs = output_probabilities(gamma, f)
    return {p: pulses * mean_pairs_per_pulse * probs[basis_index(M4, p)] for p in PAIRS_4}


def expected_singles(gamma: float, mean_pairs_per_pulse: float, pulses: int,
                     single_photon_prob: float = 0.0, dark_count_prob: float = 0.0) -> np.ndarray:
    """Expected photons per detector; independent of the overlap ``f``."""
    probs = output_probabilities(gamma, 1.0)
    per_mode = np.zeros(M4)
    for p, (j, k) in zip(probs, canonical_pairs(M4)):
        per_mode[j] += p
        per_mode[k] += p
    return pulses * (mean_pairs_per_pulse * per_mode
                     + single_photon_prob * single_photon_output_probs(gamma)
                     + dark_count_prob)


def empirical_visibility(record: CountRecord) -> float:
    """Visibility from a single tally, using the constructive/destructive pair classes."""
    con = constructive_pairs(record.gamma if record.gamma > 0 else 1.0)
    des = [p for p in PAIRS_4 if p not in con]
    hi = np.mean([record.coincidences[p] for p in con])
    lo = np.mean([record.coincidences[p] for p in des])
    return float((hi - lo) / (hi + lo)) if hi + lo > 0 else 0.0
