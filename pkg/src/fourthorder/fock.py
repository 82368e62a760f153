"""Two-photon Fock states over M modes and their evolution through linear optics.

States are indexed in a fixed canonical order: all doubly occupied modes
first (``|2>_0 ... |2>_{M-1}``), then singly occupied pairs ``|11>_{jk}`` with
``j < k`` in lexicographic order. For ``M = 4`` this is the ordering used by
the printed 10x10 output matrices.

A creation operator transforms as ``a_i^dag -> sum_m U[m, i] a_m^dag``.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import InvalidDimensionError, InvariantViolation
from .linalg import validate_density_matrix

SQRT2 = np.sqrt(2.0)
UNITARY_TOL = 1e-12

Pair = tuple[int, int]


def _check_modes(M: int) -> None:
    if int(M) != M or M < 2:
        raise InvalidDimensionError(f"need at least 2 modes, got {M!r}")


@lru_cache(maxsize=None)
def canonical_pairs(M: int) -> tuple[Pair, ...]:
    """Mode pairs ``(j, k)``, ``j <= k``, in canonical basis order."""
    _check_modes(M)
    doubles = [(j, j) for j in range(M)]
    singles = [(j, k) for j in range(M) for k in range(j + 1, M)]
    return tuple(doubles + singles)


def canonical_basis(M: int) -> list[tuple[int, ...]]:
    """Occupation vectors of all two-photon states over ``M`` modes."""
    out = []
    for j, k in canonical_pairs(M):
        occ = [0] * M
        occ[j] += 1
        occ[k] += 1
        out.append(tuple(occ))
    return out


def basis_labels(M: int) -> list[str]:
    """Human-readable labels, e.g. ``'2_0'`` and ``'11_02'``."""
    sep = "" if M <= 10 else ","
    return [f"2_{j}" if j == k else f"11_{j}{sep}{k}" for j, k in canonical_pairs(M)]


def basis_index(M: int, pair: Pair) -> int:
    j, k = sorted((int(pair[0]), int(pair[1])))
    if not (0 <= j < M and 0 <= k < M):
        raise IndexError(f"mode pair {pair} out of range for M={M}")
    return canonical_pairs(M).index((j, k))


def dimension(M: int) -> int:
    return M * (M + 1) // 2


@lru_cache(maxsize=None)
def _fock_norm(M: int) -> np.ndarray:
    return np.array([SQRT2 if j == k else 1.0 for j, k in canonical_pairs(M)])


def fock_normalization(M: int) -> np.ndarray:
    """Ratio between Fock amplitude and monomial coefficient for each basis state.

    ``|2>_j = (a_j^dag)^2 |0> / sqrt(2)`` so a monomial coefficient ``c`` on
    ``(a_j^dag)^2`` is a Fock amplitude ``sqrt(2) c``; pairs carry factor 1.
    This is the only place that constant lives.
    """
    return _fock_norm(M).copy()


# ---------------------------------------------------------------------------
# transfer matrices
# ---------------------------------------------------------------------------

def check_unitary(U, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max |U U^dag - I| <= tol``."""
    m = np.asarray(getattr(U, "entries", U), dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    dev = np.abs(m @ m.conj().T - np.eye(m.shape[0]))
    return bool(dev.max() <= tol)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Linear map on creation operators, ``a_out^dag = entries @ a_in^dag``."""

    entries: np.ndarray
    labels: tuple[str, ...] | None = None
    lossless: bool = True

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"transfer matrix must be square, got {m.shape}")
        _check_modes(m.shape[0])
        if self.labels is not None and len(self.labels) != m.shape[0]:
            raise InvalidDimensionError("one label per mode required")
        if self.lossless and not check_unitary(m):
            raise InvariantViolation("transfer matrix flagged lossless but U U^dag != I")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.entries @ other.entries,
                              lossless=self.lossless and other.lossless)


def b4_matrix() -> TransferMatrix:
    """The 4x4 multicore-fibre splitter: every entry +-1/2."""
    signs = np.array([[1, 1, 1, 1],
                      [1, 1, -1, -1],
                      [1, -1, 1, -1],
                      [1, -1, -1, 1]], dtype=float)
    return TransferMatrix(0.5 * signs, labels=("0", "1", "2", "3"))


def identity_matrix(M: int) -> TransferMatrix:
    return TransferMatrix(np.eye(M))


def transfer_to_json(U: TransferMatrix) -> dict:
    e = U.entries
    return {"m": U.m, "re": e.real.tolist(), "im": e.imag.tolist()}


def transfer_from_json(data: Mapping, lossless: bool = True) -> TransferMatrix:
    m = int(data["m"])
    re = np.asarray(data["re"], dtype=float)
    im = np.asarray(data.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != (m, m) or im.shape != (m, m):
        raise InvalidDimensionError(f"expected {m}x{m} re/im arrays")
    return TransferMatrix(re + 1j * im, lossless=lossless)


def save_transfer_matrix(U: TransferMatrix, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(transfer_to_json(U), fh, indent=2)


def load_transfer_matrix(path: str | os.PathLike, lossless: bool = True) -> TransferMatrix:
    with open(path) as fh:
        return transfer_from_json(json.load(fh), lossless=lossless)


# ---------------------------------------------------------------------------
# creation polynomials
# ---------------------------------------------------------------------------

@dataclass
class CreationPolynomial:
    """Degree-2 polynomial in creation operators, keyed by ``(j, k)``, ``j <= k``."""

    m: int
    terms: dict[Pair, complex] = field(default_factory=dict)

    def coefficient(self, j: int, k: int) -> complex:
        return self.terms.get(tuple(sorted((j, k))), 0j)

    def to_amplitudes(self) -> np.ndarray:
        """Unnormalised Fock amplitude vector over the canonical basis."""
        vec = np.zeros(dimension(self.m), dtype=complex)
        for (j, k), c in self.terms.items():
            vec[basis_index(self.m, (j, k))] = c
        return vec * _fock_norm(self.m)

    @classmethod
    def from_amplitudes(cls, m: int, amps: Sequence[complex]) -> "CreationPolynomial":
        coeffs = np.asarray(amps, dtype=complex) / _fock_norm(m)
        return cls(m, {p: complex(c) for p, c in zip(canonical_pairs(m), coeffs) if c != 0})


def transform_monomial(U: TransferMatrix, pair: Pair) -> CreationPolynomial:
    """Expand ``a_j^dag a_k^dag`` after the substitution ``a_i^dag -> sum_m U[m,i] a_m^dag``.

    Terms that cancel exactly are omitted.
    """
    M = U.m
    j, k = int(pair[0]), int(pair[1])
    if not (0 <= j < M and 0 <= k < M):
        raise IndexError(f"mode pair {pair} out of range for M={M}")
    u = U.entries
    terms: dict[Pair, complex] = {}
    for m, n in canonical_pairs(M):
        if m == n:
            c = u[m, j] * u[m, k]
        else:
            c = u[m, j] * u[n, k] + u[n, j] * u[m, k]
        if c != 0:
            terms[(m, n)] = complex(c)
    return CreationPolynomial(M, terms)


def two_photon_unitary(U: TransferMatrix) -> np.ndarray:
    """Matrix of ``U`` restricted to the two-photon subspace, canonical basis."""
    M = U.m
    coeffs = kernels.two_photon_coefficients(U.entries, np.array(canonical_pairs(M)))
    norm = _fock_norm(M)
    # column: input state -> monomial (divide by norm); row: monomial -> amplitude
    return norm[:, None] * coeffs / norm[None, :]


# ---------------------------------------------------------------------------
# density matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwoPhotonDensityMatrix:
    """Two-photon state over ``m`` modes in the canonical basis."""

    m: int
    matrix: np.ndarray
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        _check_modes(self.m)
        mat = np.array(self.matrix, dtype=complex)
        D = dimension(self.m)
        if mat.shape != (D, D):
            raise InvalidDimensionError(f"expected {D}x{D} matrix for M={self.m}, got {mat.shape}")
        if self.validate:
            validate_density_matrix(mat, "two-photon density matrix")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def basis(self) -> list[tuple[int, ...]]:
        return canonical_basis(self.m)

    def element(self, row: Pair, col: Pair) -> complex:
        return complex(self.matrix[basis_index(self.m, row), basis_index(self.m, col)])

    def probability(self, pair: Pair) -> float:
        """Probability of the detection pattern ``pair`` (diagonal element)."""
        return float(self.element(pair, pair).real)

    def probabilities(self) -> dict[Pair, float]:
        diag = np.real(np.diag(self.matrix))
        return dict(zip(canonical_pairs(self.m), diag.tolist()))

    @classmethod
    def from_pure(cls, m: int, amplitudes) -> "TwoPhotonDensityMatrix":
        psi = np.asarray(amplitudes, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(m, np.outer(psi, psi.conj()))


def transform_density_matrix(U: TransferMatrix, rho: TwoPhotonDensityMatrix) -> TwoPhotonDensityMatrix:
    """Evolve a two-photon state through ``U``: ``S rho S^dag``."""
    if U.m != rho.m:
        raise InvalidDimensionError(f"transfer matrix has {U.m} modes, state has {rho.m}")
    if not U.lossless or not check_unitary(U):
        raise InvariantViolation("transform requires a lossless (unitary) transfer matrix")
    S = two_photon_unitary(U)
    return TwoPhotonDensityMatrix(rho.m, S @ rho.matrix @ S.conj().T)
