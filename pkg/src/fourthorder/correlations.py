"""Post-selected two-qubit state and its correlations.

Qubit A is spanned by output modes (0, 1) and qubit B by (2, 3); a photon in
the first mode of a partition is ``|0>``. Basis order ``|00>, |01>, |10>, |11>``.
Geometric discord is scaled so a maximally entangled state scores 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import InvariantViolation, PostselectionError
from .fock import TwoPhotonDensityMatrix, basis_index
from .linalg import validate_density_matrix

PARTITION = ((0, 1), (2, 3))

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
I2 = np.eye(2, dtype=complex)

_S = 1 / np.sqrt(2.0)
BELL_STATES = {
    "phi+": np.array([_S, 0, 0, _S], dtype=complex),
    "phi-": np.array([_S, 0, 0, -_S], dtype=complex),
    "psi+": np.array([0, _S, _S, 0], dtype=complex),
    "psi-": np.array([0, _S, -_S, 0], dtype=complex),
}


def family_parameters(gamma: float) -> tuple[float, float, float, float]:
    """``(t, u, v, w)`` of the post-selected state for intensity ratio ``gamma``."""
    g = float(gamma)
    if not np.isfinite(g) or g < 0:
        raise ValueError(f"gamma must be finite and >= 0, got {gamma}")
    n = (1.0 + g) ** 2
    return ((1 + 4 * g + g * g) / n, (1 - g) / (1 + g), (1 - 4 * g + g * g) / n, (1 + g * g) / n)


@dataclass(frozen=True, eq=False)
class BipartiteQubitState:
    matrix: np.ndarray
    params: tuple[float, float, float, float] | None = None
    success_probability: float | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"two-qubit state must be 4x4, got {m.shape}")
        validate_density_matrix(m, "two-qubit state")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_gamma(cls, gamma: float) -> "BipartiteQubitState":
        t, u, v, w = family_parameters(gamma)
        mat = 0.25 * np.array([[t, u, u, v],
                               [u, w, w, u],
                               [u, w, w, u],
                               [v, u, u, t]])
        return cls(mat, params=(t, u, v, w))

    @classmethod
    def from_pure(cls, psi) -> "BipartiteQubitState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    def reduced(self, side: str) -> np.ndarray:
        r = self.matrix.reshape(2, 2, 2, 2)
        if side == "A":
            return np.einsum("ijkj->ik", r)
        if side == "B":
            return np.einsum("ijil->jl", r)
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def postselect_bipartite(rho: TwoPhotonDensityMatrix,
                         partition: tuple[tuple[int, int], tuple[int, int]] = PARTITION
                         ) -> BipartiteQubitState:
    """Condition on one photon in each partition and relabel as two qubits.

    The returned state carries the pre-normalisation trace as
    ``success_probability``.
    """
    (a0, a1), (b0, b1) = partition
    if rho.m != 4:
        raise ValueError("post-selection is defined for four output modes")
    if len({a0, a1, b0, b1}) != 4:
        raise ValueError(f"partition blocks must be disjoint, got {partition}")
    idx = [basis_index(4, (x, y)) for x in (a0, a1) for y in (b0, b1)]
    block = rho.matrix[np.ix_(idx, idx)]
    p = float(np.trace(block).real)
    if p <= 0:
        raise PostselectionError("post-selection event has zero probability")
    return BipartiteQubitState(block / p, success_probability=p)


def bell_decomposition(state: BipartiteQubitState, tol: float = 1e-12) -> tuple[dict[str, float], bool]:
    """Bell-basis populations, and whether the state is diagonal in that basis."""
    basis = np.array(list(BELL_STATES.values())).T
    in_bell = basis.conj().T @ state.matrix @ basis
    weights = {name: float(in_bell[i, i].real) for i, name in enumerate(BELL_STATES)}
    off = in_bell - np.diag(np.diag(in_bell))
    return weights, bool(np.max(np.abs(off)) <= tol)


@dataclass(frozen=True)
class BlochDecomposition:
    r_a: np.ndarray
    r_b: np.ndarray
    corr: np.ndarray

    def reconstruct(self) -> np.ndarray:
        rho = np.kron(I2, I2).astype(complex)
        for i, s in enumerate(PAULIS):
            rho += self.r_a[i] * np.kron(s, I2) + self.r_b[i] * np.kron(I2, s)
            for j, t in enumerate(PAULIS):
                rho += self.corr[i, j] * np.kron(s, t)
        return rho / 4


def bloch_decompose(state: BipartiteQubitState) -> BlochDecomposition:
    rho = state.matrix
    ev = lambda op: float(np.trace(rho @ op).real)  # noqa: E731
    r_a = np.array([ev(np.kron(s, I2)) for s in PAULIS])
    r_b = np.array([ev(np.kron(I2, s)) for s in PAULIS])
    corr = np.array([[ev(np.kron(s, t)) for t in PAULIS] for s in PAULIS])
    return BlochDecomposition(r_a, r_b, corr)


def purity(state: BipartiteQubitState) -> float:
    return float(np.trace(state.matrix @ state.matrix).real)


def local_coherence(state: BipartiteQubitState, side: str = "A") -> float:
    """``2 |<sigma_+>|``: twice the off-diagonal magnitude of the reduced state."""
    return float(2 * abs(state.reduced(side)[0, 1]))


def discord_branches(gamma: float) -> tuple[float, float, float]:
    """The three candidates inside the ``max`` of the closed-form discord."""
    t, u, v, w = family_parameters(gamma)
    return ((w - v) ** 2 / 4, (t - w) ** 2 / 4, ((w + v) ** 2 + 4 * u * u) / 4)


def active_branch(gamma: float) -> int:
    return int(np.argmax(discord_branches(gamma)))


def geometric_discord_closed(gamma: float) -> float:
    """Closed-form geometric discord of the post-selected family."""
    t, u, v, w = family_parameters(gamma)
    return 0.5 * ((w * w + v * v) / 2 + (t - w) ** 2 / 4 + u * u - max(discord_branches(gamma)))


def geometric_discord_general(state: BipartiteQubitState) -> float:
    """Geometric discord (measurement on A) of any two-qubit state, Bell state = 1.

    ``(1/2) (|r_A|^2 + ||C||_F^2 - k_max)`` with ``k_max`` the largest
    eigenvalue of ``r_A r_A^T + C C^T``.
    """
    bloch = bloch_decompose(state)
    x, T = bloch.r_a, bloch.corr
    K = np.outer(x, x) + T @ T.T
    k_max = float(np.linalg.eigvalsh(K)[-1])
    d = 0.5 * (x @ x + np.sum(T * T) - k_max)
    return max(float(d), 0.0)


@dataclass(frozen=True)
class DiscordMaximum:
    gamma_star: float
    d_star: float
    kink_gamma: float


def kink_gamma(lo: float = 1e-6, hi: float = 1.0 - 1e-6) -> float:
    """Intensity ratio at which the active branch of the discord ``max`` switches."""
    def gap(g):
        b = discord_branches(g)
        return b[0] - b[2]
    return float(brentq(gap, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def maximize_discord(tolerance: float = 1e-4, grid_step: float = 1e-3) -> DiscordMaximum:
    """Maximise the closed-form discord over ``gamma`` in [0, 1].

    Grid scan, then golden-section search inside the bracketing grid cell.
    Raises :class:`InvariantViolation` if the optimum and the branch switch
    disagree by more than ``max(tolerance, grid_step)``.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    grid = np.linspace(0.0, 1.0, int(round(1.0 / grid_step)) + 1)
    vals = np.array([geometric_discord_closed(g) for g in grid])
    i = int(np.argmax(vals))
    if 0 < i < len(grid) - 1:
        res = minimize_scalar(lambda g: -geometric_discord_closed(g), method="golden",
                              bracket=(grid[i - 1], grid[i], grid[i + 1]),
                              options={"xtol": tolerance})
        g_star = float(res.x)
    else:
        g_star = float(grid[i])
    d_star = geometric_discord_closed(g_star)
    kink = kink_gamma()
    if abs(g_star - kink) > max(tolerance, grid_step):
        raise InvariantViolation(f"discord maximum at {g_star:.6f} but branch switch at {kink:.6f}")
    return DiscordMaximum(g_star, d_star, kink)
