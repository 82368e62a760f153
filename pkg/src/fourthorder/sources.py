"""Truncated two-photon input state of two mutually incoherent weak coherent states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError
from .fock import TwoPhotonDensityMatrix, basis_index, dimension

DEFAULT_INPUT_MODES = (1, 3)


def poisson_photon_prob(mu: float, n: int) -> float:
    """Probability that a coherent state of mean photon number ``mu`` holds ``n`` photons."""
    if mu < 0:
        raise ValueError(f"mean photon number must be non-negative, got {mu}")
    if n < 0 or int(n) != n:
        raise ValueError(f"photon number must be a non-negative integer, got {n}")
    if mu == 0:
        return 1.0 if n == 0 else 0.0
    return math.exp(n * math.log(mu) - mu - math.lgamma(n + 1))


def two_photon_sector_probability(mu: float, mu_prime: float) -> float:
    """Probability that the two sources jointly emit exactly two photons."""
    if mu < 0 or mu_prime < 0:
        raise ValueError("mean photon numbers must be non-negative")
    return math.exp(-mu - mu_prime) * (0.5 * mu * mu + 0.5 * mu_prime * mu_prime + mu * mu_prime)


def one_photon_sector_probability(mu: float, mu_prime: float) -> float:
    if mu < 0 or mu_prime < 0:
        raise ValueError("mean photon numbers must be non-negative")
    return math.exp(-mu - mu_prime) * (mu + mu_prime)


def gamma_from_means(mu: float, mu_prime: float) -> float:
    """Ratio that puts the truncated state of sources ``(mu, mu_prime)`` in the
    ``1 : gamma^2 : 2 gamma`` form, with ``mu`` feeding the first input mode.

    That ratio is ``mu_prime / mu``.
    """
    if mu <= 0 or mu_prime < 0:
        raise ValueError("need mu > 0 and mu_prime >= 0")
    return mu_prime / mu


@dataclass(frozen=True)
class WcsPair:
    """Two mutually incoherent weak coherent states injected into ``input_modes``."""

    gamma: float
    input_modes: tuple[int, int] = DEFAULT_INPUT_MODES

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise ValueError(f"gamma must be finite and >= 0, got {self.gamma}")
        a, b = self.input_modes
        if a == b:
            raise ValueError(f"input modes must be distinct, got {self.input_modes}")

    @property
    def weights(self) -> tuple[float, float, float]:
        """Normalised ``(w20, w02, w11)``, proportional to ``1 : gamma^2 : 2 gamma``."""
        return input_weights(self.gamma)


def input_weights(gamma: float) -> tuple[float, float, float]:
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    norm = (1.0 + gamma) ** 2
    return 1.0 / norm, gamma * gamma / norm, 2.0 * gamma / norm


def weights_from_means(mu: float, mu_prime: float) -> tuple[float, float, float]:
    """``p2 p0' : p0 p2' : p1 p1'`` renormalised, ``mu`` on the first input mode."""
    p = poisson_photon_prob
    raw = np.array([p(mu, 2) * p(mu_prime, 0),
                    p(mu, 0) * p(mu_prime, 2),
                    p(mu, 1) * p(mu_prime, 1)])
    total = raw.sum()
    if total == 0:
        raise ValueError("both sources are vacuum")
    return tuple((raw / total).tolist())


def build_input_state(pair: WcsPair | float, m: int = 4) -> TwoPhotonDensityMatrix:
    """Diagonal two-photon input state over ``m`` modes.

    Accepts a :class:`WcsPair` or a bare ``gamma`` (default injection modes).
    """
    if not isinstance(pair, WcsPair):
        pair = WcsPair(float(pair))
    a, b = pair.input_modes
    if not (0 <= a < m and 0 <= b < m):
        raise InvalidDimensionError(f"input modes {pair.input_modes} out of range for M={m}")
    w20, w02, w11 = pair.weights
    rho = np.zeros((dimension(m),) * 2)
    rho[basis_index(m, (a, a)), basis_index(m, (a, a))] = w20
    rho[basis_index(m, (b, b)), basis_index(m, (b, b))] = w02
    rho[basis_index(m, (a, b)), basis_index(m, (a, b))] = w11
    return TwoPhotonDensityMatrix(m, rho)
