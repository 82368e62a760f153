"""Pure-Python reference implementations of the hot kernels.

These are the fallback when ``fourthorder._ckernels`` is not built, and the
oracle the compiled versions are tested against. Keep both in lockstep.
"""
from __future__ import annotations

import numpy as np


def two_photon_coefficients(U, pairs):
    """Monomial coefficients of every transformed two-photon monomial.

    Column ``c`` holds the expansion of ``a_j^dag a_k^dag`` (``(j, k) = pairs[c]``)
    after ``a_i^dag -> sum_m U[m, i] a_m^dag``, indexed by the output
    monomials in the same ``pairs`` order. No Fock normalisation applied.
    """
    u = np.asarray(U, dtype=complex).tolist()
    pl = [(int(j), int(k)) for j, k in np.asarray(pairs)]
    D = len(pl)
    out = [[0j] * D for _ in range(D)]
    for c, (j, k) in enumerate(pl):
        for r, (m, n) in enumerate(pl):
            if m == n:
                out[r][c] = u[m][j] * u[m][k]
            else:
                out[r][c] = u[m][j] * u[n][k] + u[n][j] * u[m][k]
    return np.array(out, dtype=complex)


def _search(cum, x):
    n = len(cum)
    for i in range(n - 1):
        if x < cum[i]:
            return i
    return n - 1


def tally_pulses(event_u, outcome_u, dark_u, p_single, p_pair, cum_single,
                 cum_pair, pairs, p_dark):
    """Per-pulse detector tally.

    Returns ``(singles, coincidences, n_single_events, n_pair_events)`` where
    ``singles[d]`` counts photons (plus dark clicks) at detector ``d`` and
    ``coincidences[j, k]`` (j < k) counts pulses in which both ``j`` and ``k``
    registered at least one click.
    """
    M = len(cum_single)
    ev = np.asarray(event_u, dtype=float).tolist()
    oc = np.asarray(outcome_u, dtype=float).tolist()
    cs = [float(x) for x in cum_single]
    cp = [float(x) for x in cum_pair]
    pl = [(int(j), int(k)) for j, k in np.asarray(pairs)]
    use_dark = dark_u is not None and p_dark > 0.0
    dk = np.asarray(dark_u, dtype=float).tolist() if use_dark else None
    thresh = p_single + p_pair

    singles = [0] * M
    coinc = [[0] * M for _ in range(M)]
    n_one = 0
    n_two = 0
    for i in range(len(ev)):
        photons = [0] * M
        u = ev[i]
        if u < p_single:
            photons[_search(cs, oc[i])] += 1
            n_one += 1
        elif u < thresh:
            j, k = pl[_search(cp, oc[i])]
            photons[j] += 1
            photons[k] += 1
            n_two += 1
        if use_dark:
            row = dk[i]
            for d in range(M):
                if row[d] < p_dark:
                    photons[d] += 1
        for d in range(M):
            if photons[d]:
                singles[d] += photons[d]
                for e in range(d + 1, M):
                    if photons[e]:
                        coinc[d][e] += 1
    return (np.array(singles, dtype=np.int64), np.array(coinc, dtype=np.int64),
            n_one, n_two)
