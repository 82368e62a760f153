"""Command-line entry point.

One command per figure-style data set::

    fourthorder hom-sweep      coincidences vs. photon overlap (Monte Carlo with --seed)
    fourthorder fringe         two-photon vs. single-photon phase fringes
    fourthorder discord-sweep  purity, coherence and discord vs. gamma
    fourthorder noisy-curve    discord vs. coherence with dephasing / mode mismatch
    fourthorder discord-max    optimal intensity ratio
    fourthorder state-dump     full 10x10 and post-selected 4x4 states

Exit status: 0 success, 2 usage error, 3 numerical invariant violated.
Without ``--out``, output goes to ``$FOURTHORDER_OUTPUT_DIR/<command>.<ext>``
when that variable is set, else to stdout (no sidecar).
"""
from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .correlations import (
    BipartiteQubitState,
    active_branch,
    geometric_discord_closed,
    local_coherence,
    maximize_discord,
    purity,
)
from .errors import InvariantViolation
from .interference import (
    PAIRS_4,
    constructive_pairs,
    distinguishability_sweep,
    empirical_visibility,
    expected_singles,
    fit_sinusoid,
    hom_visibility,
    simulate_counts,
    two_photon_fringe,
)
from .kernels import BACKEND
from .noise import NoiseParams, noisy_sweep
from .sources import gamma_from_means, one_photon_sector_probability, two_photon_sector_probability
from .tables import sidecar_path, state_dump, write_json, write_table

log = logging.getLogger("fourthorder")

OUTPUT_DIR_ENV = "FOURTHORDER_OUTPUT_DIR"
EXIT_USAGE = 2
EXIT_INVARIANT = 3


class UsageError(ValueError):
    pass


def _nonneg(x: str) -> float:
    v = float(x)
    if not math.isfinite(v) or v < 0:
        raise argparse.ArgumentTypeError(f"expected a finite non-negative number, got {x}")
    return v


def _unit(x: str) -> float:
    v = float(x)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a number in [0, 1], got {x}")
    return v


def _pos_int(x: str) -> int:
    v = int(x)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {x}")
    return v


def _pair(x: str) -> tuple[int, int]:
    try:
        j, k = (int(p) for p in x.replace(",", " ").split())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a mode pair like '0,1', got {x!r}") from None
    if j == k or not (0 <= j < 4 and 0 <= k < 4):
        raise argparse.ArgumentTypeError(f"invalid mode pair {x!r}")
    return (j, k)


def _float_list(x: str) -> list[float]:
    items = [s for s in x.replace(",", " ").split() if s]
    return [float(s) for s in items]


def _resolve_out(args, ext: str):
    if args.out:
        return args.out
    outdir = os.environ.get(OUTPUT_DIR_ENV)
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        return os.path.join(outdir, f"{args.command}.{ext}")
    return None


def _emit_table(args, columns: dict, comments: list[str], meta: dict) -> None:
    fmt = getattr(args, "format", "csv")
    path = _resolve_out(args, fmt)
    meta = {"command": args.command, "version": __version__, "backend": BACKEND, **meta}
    if fmt == "json":
        payload = {"meta": meta, "columns": {k: np.asarray(v).tolist() for k, v in columns.items()}}
        write_json(path if path else sys.stdout, payload)
        return
    write_table(path if path else sys.stdout, columns, comments)
    if path:
        write_json(sidecar_path(path), meta)


def _emit_json(args, payload: dict) -> None:
    path = _resolve_out(args, "json")
    write_json(path if path else sys.stdout, payload)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_state_dump(args) -> None:
    _emit_json(args, state_dump(args.gamma))


def _f_grid(args) -> list[float]:
    if args.f_values is not None:
        grid = _float_list(args.f_values)
    else:
        grid = list(np.linspace(0.0, 1.0, args.f_steps)) if args.f_steps > 0 else []
    if not grid:
        raise UsageError("overlap grid is empty")
    if any(not 0.0 <= f <= 1.0 for f in grid):
        raise UsageError("overlap values must lie in [0, 1]")
    return [float(f) for f in grid]


def cmd_hom_sweep(args) -> None:
    grid = _f_grid(args)
    if args.mu is not None or args.mu_prime is not None:
        if args.mu is None or args.mu_prime is None:
            raise UsageError("--mu and --mu-prime go together")
        gamma = gamma_from_means(args.mu, args.mu_prime)
        p_pair = two_photon_sector_probability(args.mu, args.mu_prime)
        p_one = one_photon_sector_probability(args.mu, args.mu_prime)
    else:
        gamma, p_pair, p_one = args.gamma, args.pairs_per_pulse, args.single_photon_prob

    curves = distinguishability_sweep(gamma, grid)
    cols: dict[str, list] = {"f": grid}
    for (j, k), vals in curves.items():
        cols[f"p_{j}{k}"] = vals
    meta = {"gamma": gamma, "f_grid": grid, "analytic_visibility": hom_visibility(gamma),
            "constructive_pairs": [f"{j}{k}" for j, k in constructive_pairs(gamma or 1.0)]}
    comments = ["f: internal-mode overlap of photons from the two sources (dimensionless, 0..1)",
                "p_jk: probability per two-photon event of one photon at j and one at k"]

    if args.seed is not None:
        if p_pair + p_one > 1:
            raise UsageError("event probabilities exceed 1")
        recs = [simulate_counts(gamma, f, p_pair, args.pulses, args.seed + i,
                                single_photon_prob=p_one, dark_count_prob=args.dark_count_prob)
                for i, f in enumerate(grid)]
        for j, k in PAIRS_4:
            cols[f"c_{j}{k}"] = [r.coincidences[(j, k)] for r in recs]
        for d in range(4):
            cols[f"s_{d}"] = [int(r.singles[d]) for r in recs]
        exp_s = expected_singles(gamma, p_pair, args.pulses, p_one, args.dark_count_prob)
        for d in range(4):
            cols[f"s_{d}_expected"] = [float(exp_s[d])] * len(grid)
        best = int(np.argmax(grid))
        meta.update({"seed": args.seed, "seeds": [args.seed + i for i in range(len(grid))],
                     "pulses": args.pulses, "pairs_per_pulse": p_pair,
                     "single_photon_prob": p_one, "dark_count_prob": args.dark_count_prob,
                     "coincidence_window_ns": args.window_ns,
                     "mc_visibility_at_max_overlap": empirical_visibility(recs[best])})
        comments += ["c_jk: simulated coincidence counts (pulses with clicks at j and k)",
                     "s_d: simulated photon counts at detector d; s_d_expected: analytic mean"]
    _emit_table(args, cols, comments, meta)


def cmd_fringe(args) -> None:
    n = args.phase_steps
    phases = np.linspace(0.0, args.phase_max, n, endpoint=False)
    curve = two_photon_fringe(args.gamma, args.pair, phases,
                              single_photon_contrast=args.single_contrast,
                              zero_coherence=args.zero_coherence)
    two = fit_sinusoid(phases, curve.values)
    one = fit_sinusoid(phases, curve.single)
    ratio = two.frequency / one.frequency if one.frequency > 0 else float("nan")
    meta = {
        "gamma": args.gamma, "pair": list(args.pair), "phase_max": args.phase_max,
        "phase_steps": n, "single_photon_contrast": args.single_contrast,
        "zero_coherence": args.zero_coherence,
        "two_photon_frequency": two.frequency, "single_photon_frequency": one.frequency,
        "two_photon_period": 2 * np.pi / two.frequency if two.frequency > 0 else None,
        "single_photon_period": 2 * np.pi / one.frequency if one.frequency > 0 else None,
        "frequency_ratio": ratio,
        "modulation_ratio": two.amplitude / two.offset,
        "visibility_max_min": curve.visibility(),
        "visibility_offset_convention": ((two.offset - two.amplitude) / (two.offset + two.amplitude)),
    }
    cols = {"phase": phases, "p_two_photon": curve.values, "p_single_photon": curve.single}
    comments = ["phase: relative phase before the 2x2 splitter (rad)",
                "p_two_photon: coincidence probability of the normalised two-photon sub-block",
                "p_single_photon: detector-0 probability of the one-photon reference state"]
    _emit_table(args, cols, comments, meta)


def _gamma_grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if not 0.0 <= lo <= hi:
        raise UsageError("need 0 <= gamma-min <= gamma-max")
    return np.linspace(lo, hi, steps)


def cmd_discord_sweep(args) -> None:
    gammas = _gamma_grid(args.gamma_min, args.gamma_max, args.steps)
    states = [BipartiteQubitState.from_gamma(g) for g in gammas]
    cols = {
        "gamma": gammas,
        "purity": [purity(s) for s in states],
        "coherence": [local_coherence(s, "A") for s in states],
        "discord": [geometric_discord_closed(g) for g in gammas],
        "active_branch": [active_branch(g) for g in gammas],
    }
    comments = ["gamma: ratio of mean photon numbers of the two inputs",
                "purity: tr(rho_AB^2); coherence: 2|<sigma_+>| of qubit A",
                "discord: geometric discord (Bell state = 1)",
                "active_branch: index of the maximal term inside the discord max (0, 1, 2)"]
    meta = {"gamma_min": args.gamma_min, "gamma_max": args.gamma_max, "steps": args.steps}
    _emit_table(args, cols, comments, meta)


def cmd_discord_max(args) -> None:
    res = maximize_discord(args.tol)
    _emit_json(args, {"gamma_star": res.gamma_star, "d_star": res.d_star,
                      "kink_gamma": res.kink_gamma, "tol": args.tol})


def cmd_noisy_curve(args) -> None:
    params = NoiseParams(args.dephasing, args.visibility)
    gammas = np.linspace(0.0, 1.0, args.steps)
    cols = noisy_sweep(params, gammas)
    comments = ["gamma: ratio of mean photon numbers of the two inputs",
                "coherence: local coherence of qubit A of the noisy state",
                "discord_ideal / discord_noisy: geometric discord (Bell state = 1)"]
    meta = {"dephasing_lambda": args.dephasing, "overlap_visibility": args.visibility,
            "steps": args.steps}
    _emit_table(args, cols, comments, meta)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fourthorder", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, table=True):
        sp.add_argument("--out", help="output file (default: $%s or stdout)" % OUTPUT_DIR_ENV)
        if table:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("state-dump", help="write the 10x10 and post-selected states as JSON")
    sp.add_argument("--gamma", type=_nonneg, required=True)
    common(sp, table=False)
    sp.set_defaults(func=cmd_state_dump)

    sp = sub.add_parser("hom-sweep", help="coincidence probabilities/counts vs. overlap")
    sp.add_argument("--gamma", type=_nonneg, default=1.0)
    sp.add_argument("--mu", type=_nonneg, help="mean photon number into input mode 1")
    sp.add_argument("--mu-prime", type=_nonneg, help="mean photon number into input mode 3")
    sp.add_argument("--f-values", help="comma-separated overlaps in [0, 1]")
    sp.add_argument("--f-steps", type=int, default=11, help="uniform overlap grid on [0, 1]")
    sp.add_argument("--seed", type=int, help="enables the Monte Carlo columns")
    sp.add_argument("--pulses", type=_pos_int, default=1_000_000)
    sp.add_argument("--pairs-per-pulse", type=_unit, default=0.1)
    sp.add_argument("--single-photon-prob", type=_unit, default=0.0)
    sp.add_argument("--dark-count-prob", type=_unit, default=0.0)
    sp.add_argument("--window-ns", type=_nonneg, default=1.0, help="recorded as metadata only")
    common(sp)
    sp.set_defaults(func=cmd_hom_sweep)

    sp = sub.add_parser("fringe", help="two-photon and single-photon phase fringes")
    sp.add_argument("--gamma", type=_nonneg, default=1.0)
    sp.add_argument("--pair", type=_pair, default=(0, 1))
    sp.add_argument("--phase-steps", type=_pos_int, default=256)
    sp.add_argument("--phase-max", type=float, default=2 * np.pi)
    sp.add_argument("--single-contrast", type=_unit, default=0.2)
    sp.add_argument("--zero-coherence", action="store_true",
                    help="drop the |2>_j<->|2>_k coherence (flat fringe)")
    common(sp)
    sp.set_defaults(func=cmd_fringe)

    sp = sub.add_parser("discord-sweep", help="purity, coherence and discord vs. gamma")
    sp.add_argument("--gamma-min", type=_nonneg, default=0.0)
    sp.add_argument("--gamma-max", type=_nonneg, default=1.0)
    sp.add_argument("--steps", type=_pos_int, default=1001)
    common(sp)
    sp.set_defaults(func=cmd_discord_sweep)

    sp = sub.add_parser("discord-max", help="gamma maximising the geometric discord")
    sp.add_argument("--tol", type=float, default=1e-6)
    common(sp, table=False)
    sp.set_defaults(func=cmd_discord_max)

    sp = sub.add_parser("noisy-curve", help="discord vs. coherence with imperfections")
    sp.add_argument("--lambda", dest="dephasing", type=_unit, default=1.0,
                    help="off-diagonal survival factor")
    sp.add_argument("--visibility", type=_unit, default=1.0,
                    help="cross-source overlap (measured HOM visibility / 0.5)")
    sp.add_argument("--steps", type=_pos_int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_noisy_curve)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "tol", 1.0) <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "phase_max", 1.0) <= 0:
        parser.error("--phase-max must be positive")
    try:
        args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        log.error("numerical invariant violated: %s", exc)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"{parser.prog} {args.command}: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
