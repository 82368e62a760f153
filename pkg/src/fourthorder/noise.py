"""Phenomenological imperfections for the post-selected state.

Two knobs:

* ``overlap_visibility`` -- internal-mode overlap of photons from different
  sources. The part of the post-selected state that exists only because those
  photons interfere is scaled by it; ``1`` is perfect overlap.
* ``dephasing_lambda`` -- every off-diagonal element of the two-qubit state is
  multiplied by it.

The interference part is built from the engine, as the difference between the
post-selected output for interfering and for distinguishable cross-source
photons, rather than by tagging matrix entries by hand.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .correlations import (
    PARTITION,
    BipartiteQubitState,
    geometric_discord_closed,
    geometric_discord_general,
    local_coherence,
)
from .fock import TransferMatrix, b4_matrix, basis_index, two_photon_unitary
from .sources import DEFAULT_INPUT_MODES, input_weights

WCS_IDEAL_VISIBILITY = 0.5


@dataclass(frozen=True)
class NoiseParams:
    dephasing_lambda: float = 1.0
    overlap_visibility: float = 1.0

    def __post_init__(self):
        for name in ("dephasing_lambda", "overlap_visibility"):
            x = getattr(self, name)
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {x}")

    @classmethod
    def from_measured_visibility(cls, v_wcs: float, dephasing_lambda: float = 1.0) -> "NoiseParams":
        """Overlap from a measured HOM visibility (ideal value 1/2)."""
        return cls(dephasing_lambda, min(v_wcs / WCS_IDEAL_VISIBILITY, 1.0))


def _postselected_components(gamma: float, U: TransferMatrix, input_modes, partition):
    """Unnormalised post-selected blocks: (same-source, interfering, distinguishable)."""
    (a0, a1), (b0, b1) = partition
    A, B = (a0, a1), (b0, b1)
    a, b = input_modes
    M = U.m
    S = two_photon_unitary(U)
    rows = [basis_index(M, (x, y)) for x in A for y in B]
    w20, w02, w11 = input_weights(gamma)

    def block(col):
        psi = S[rows, basis_index(M, col)]
        return np.outer(psi, psi.conj())

    same = w20 * block((a, a)) + w02 * block((b, b))
    interfering = w11 * block((a, b))
    e = U.entries
    one = np.array([e[x, a] * e[y, b] for x in A for y in B])
    two = np.array([e[x, b] * e[y, a] for x in A for y in B])
    dist = w11 * (np.outer(one, one.conj()) + np.outer(two, two.conj()))
    return same, interfering, dist


def interference_term(gamma: float, U: TransferMatrix | None = None,
                      input_modes=DEFAULT_INPUT_MODES, partition=PARTITION) -> np.ndarray:
    """Normalised change of the post-selected state when cross-source photons interfere."""
    U = b4_matrix() if U is None else U
    same, inter, dist = _postselected_components(gamma, U, input_modes, partition)
    p_on = np.trace(same + inter).real
    p_off = np.trace(same + dist).real
    return (same + inter) / p_on - (same + dist) / p_off


def apply_noise(gamma: float, params: NoiseParams, U: TransferMatrix | None = None,
                input_modes=DEFAULT_INPUT_MODES, partition=PARTITION) -> BipartiteQubitState:
    """Post-selected state with partial overlap and dephasing applied."""
    U = b4_matrix() if U is None else U
    same, inter, dist = _postselected_components(gamma, U, input_modes, partition)
    v = params.overlap_visibility
    rho = same + v * inter + (1.0 - v) * dist
    rho = rho / np.trace(rho).real
    lam = params.dephasing_lambda
    rho = lam * rho + (1.0 - lam) * np.diag(np.diag(rho))
    return BipartiteQubitState(rho)


def discord_vs_coherence_curve(params: NoiseParams, gammas: Iterable[float],
                               side: str = "A") -> list[tuple[float, float]]:
    """``(local coherence, geometric discord)`` along a ``gamma`` grid in [0, 1]."""
    out = []
    for g in gammas:
        if not 0.0 <= g <= 1.0:
            raise ValueError(f"gamma grid must lie in [0, 1], got {g}")
        st = apply_noise(g, params)
        out.append((local_coherence(st, side), geometric_discord_general(st)))
    return out


def noisy_sweep(params: NoiseParams, gammas: Iterable[float]) -> dict[str, np.ndarray]:
    """Columns for the noisy-curve table: gamma, coherence, ideal and noisy discord."""
    gammas = np.asarray(list(gammas), dtype=float)
    curve = discord_vs_coherence_curve(params, gammas)
    return {
        "gamma": gammas,
        "coherence": np.array([c for c, _ in curve]),
        "discord_ideal": np.array([geometric_discord_closed(g) for g in gammas]),
        "discord_noisy": np.array([d for _, d in curve]),
    }
