"""Command-line harness for reproducible experiment sweeps.

Subcommands: `bounds` evaluates every closed-form bound on a parameter
grid, `exact-risk` computes enumeration-based risks on named families,
`mc` cross-validates them by seeded Monte Carlo, and `reproduce` runs
scripted trend sweeps with PASS/FAIL verdicts.

Reruns with identical arguments produce byte-identical output files;
wall-clock timing is therefore only recorded with --timing.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
import time
from typing import Optional

from . import bounds as bnd
from .core import CompressedFamily
from .estimators import (DEFAULT_ETA, CoordinatewiseEstimator, ThresholdConfig,
                         empirical_estimator, threshold_estimator)
from .exact import estimator_risk_exact
from .families import (CompositePrior, bayes_risk_entropy_ball_constrained,
                       bayes_risk_two_point, entropy_ball_family, two_point_prior)
from .montecarlo import McConfig, mc_risk
from .report import ReportRow, write_report
from .rng import derive_seed

_E = math.exp(1.0)


class UsageError(Exception):
    """Bad invocation or unreadable input; aborts the whole run."""


class FamilyFileError(UsageError):
    pass


# ---------------------------------------------------------------------------
# input handling

def load_family_file(path: str) -> CompressedFamily:
    """Parse 'value multiplicity' lines ('#' comments allowed) into a family."""
    atoms = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise FamilyFileError(f"{path}: {exc.strerror}") from exc
    with fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise FamilyFileError(
                    f"{path}:{lineno}: expected 'value multiplicity', got {line!r}")
            try:
                value = float(parts[0])
                mult = int(parts[1])
            except ValueError as exc:
                raise FamilyFileError(f"{path}:{lineno}: {exc}") from exc
            atoms.append((value, mult))
    if not atoms:
        raise FamilyFileError(f"{path}: no atoms found")
    try:
        return CompressedFamily(tuple(atoms))
    except ValueError as exc:
        raise FamilyFileError(f"{path}: {exc}") from exc


def _build_estimator(name: str, n: int, eta: Optional[float]) -> CoordinatewiseEstimator:
    if name == "empirical":
        return empirical_estimator()
    if name == "threshold":
        return threshold_estimator(ThresholdConfig(n, eta if eta is not None else DEFAULT_ETA))
    raise UsageError(f"unknown estimator {name!r}")


def _uniform_family(S: int) -> CompressedFamily:
    if S < 1:
        raise ValueError("S must be positive")
    return CompressedFamily(((1.0 / S, S),))


# ---------------------------------------------------------------------------
# bound evaluation per cell

def _cell_bounds(H=None, S=None, c=None, eta=None, n=None, zeta=None):
    """All bounds whose parameters are present and inside their domains."""
    values: dict = {}
    flags: dict = {}

    def put(name, compute):
        try:
            result = compute()
        except ValueError:
            return
        if isinstance(result, bnd.BoundValue):
            values[name] = result.value
            flags[name] = result.vacuous
        else:
            values[name] = result

    if S is not None:
        put("classical_constant", lambda: bnd.classical_constant(S))
    if S is not None and n is not None:
        put("mle_upper_simple", lambda: bnd.mle_upper_simple(S, n))
        put("mle_upper_tight", lambda: bnd.mle_upper_tight(S, n))
        if zeta is not None:
            put("minimax_lower_hd",
                lambda: bnd.minimax_lower_hd(bnd.HighDimParams(S, n, zeta)))
    if H is not None and n is not None:
        if c is not None:
            put("mle_entropy_lower", lambda: bnd.mle_entropy_lower(H, n, c))
            put("minimax_entropy_lower", lambda: bnd.minimax_entropy_lower(H, n, c))
            put("simplex_lower", lambda: bnd.simplex_lower(H, n, c))
        if eta is not None:
            put("mle_entropy_upper", lambda: bnd.mle_entropy_upper(H, n, eta))
            put("threshold_upper", lambda: bnd.threshold_upper(H, n, eta))
    return values, flags


# ---------------------------------------------------------------------------
# subcommands

def _grid(values, default=(None,)):
    return list(values) if values else list(default)


def cmd_bounds(args) -> int:
    if not any([args.grid_H, args.grid_S, args.grid_c, args.grid_eta,
                args.grid_n, args.grid_zeta]):
        raise UsageError("bounds needs at least one --grid-* parameter")
    rows = []
    cells = itertools.product(_grid(args.grid_H), _grid(args.grid_S),
                              _grid(args.grid_c), _grid(args.grid_eta),
                              _grid(args.grid_n), _grid(args.grid_zeta))
    for H, S, c, eta, n, zeta in cells:
        row = ReportRow(params={"H": H, "S": S, "c": c, "eta": eta,
                                "n": n, "zeta": zeta}, seed=args.seed)
        started = time.perf_counter()
        try:
            row.bounds, row.vacuous = _cell_bounds(H=H, S=S, c=c, eta=eta, n=n, zeta=zeta)
        except Exception as exc:  # keep the sweep going, record the cell
            row.error = str(exc)
        if args.timing:
            row.runtime_ms = (time.perf_counter() - started) * 1e3
        rows.append(row)
    write_report(rows, args.format, args.out)
    return 0


def _family_cells(args):
    """Cells (params dict, family builder) for the requested family kind."""
    family = args.family or "uniform"
    if not args.grid_n:
        raise UsageError("--grid-n is required")
    cells = []
    if family == "uniform":
        if not args.grid_S:
            raise UsageError("--family uniform requires --grid-S")
        for S, n in itertools.product(args.grid_S, args.grid_n):
            cells.append(({"S": S, "n": n, "family": family},
                          lambda S=S: _uniform_family(S)))
    elif family == "entropy-ball":
        if not (args.grid_H and args.grid_c):
            raise UsageError("--family entropy-ball requires --grid-H and --grid-c")
        for H, c, n in itertools.product(args.grid_H, args.grid_c, args.grid_n):
            def build(H=H, c=c, n=n):
                return entropy_ball_family(H, c * H / math.log(n)).family
            cells.append(({"H": H, "c": c, "n": n, "family": family}, build))
    elif family.startswith("file:"):
        fam = load_family_file(family[len("file:"):])
        for n in args.grid_n:
            cells.append(({"n": n, "family": family}, lambda fam=fam: fam))
    else:
        raise UsageError(f"unknown family {family!r} "
                         "(expected uniform, entropy-ball or file:PATH)")
    return cells


def _estimator_eta_product(args):
    estimators = args.estimator or ["empirical"]
    etas = args.grid_eta or [DEFAULT_ETA if "threshold" in estimators else None]
    return list(itertools.product(estimators, etas))


def cmd_exact_risk(args) -> int:
    rows = []
    for params, build_family in _family_cells(args):
        for est_name, eta in _estimator_eta_product(args):
            n = params["n"]
            row = ReportRow(params={**params, "estimator": est_name, "eta": eta},
                            seed=args.seed)
            started = time.perf_counter()
            try:
                fam = build_family()
                estimator = _build_estimator(est_name, n, eta)
                row.exact_risk = estimator_risk_exact(fam, estimator, n)
                row.bounds, row.vacuous = _cell_bounds(
                    H=params.get("H"), S=params.get("S"), c=params.get("c"),
                    eta=eta, n=n)
            except Exception as exc:
                row.error = str(exc)
            if args.timing:
                row.runtime_ms = (time.perf_counter() - started) * 1e3
            rows.append(row)
    write_report(rows, args.format, args.out)
    return 0


def cmd_mc(args) -> int:
    rows = []
    index = 0
    for params, build_family in _family_cells(args):
        for est_name, eta in _estimator_eta_product(args):
            n = params["n"]
            row = ReportRow(params={**params, "estimator": est_name, "eta": eta},
                            seed=args.seed)
            started = time.perf_counter()
            try:
                fam = build_family()
                estimator = _build_estimator(est_name, n, eta)
                cfg = McConfig(replicates=args.replicates,
                               master_seed=derive_seed(args.seed, index))
                estimate = mc_risk(fam, estimator, n, cfg)
                row.mc_mean = estimate.mean
                row.mc_ci_lo = estimate.ci_lo
                row.mc_ci_hi = estimate.ci_hi
                row.exact_risk = estimator_risk_exact(fam, estimator, n)
                row.mc_within_ci = bool(estimate.ci_lo <= row.exact_risk <= estimate.ci_hi)
                row.bounds, row.vacuous = _cell_bounds(
                    H=params.get("H"), S=params.get("S"), c=params.get("c"),
                    eta=eta, n=n)
            except Exception as exc:
                row.error = str(exc)
            if args.timing:
                row.runtime_ms = (time.perf_counter() - started) * 1e3
            rows.append(row)
            index += 1
    write_report(rows, args.format, args.out)
    return 0


# ---------------------------------------------------------------------------
# scripted trend sweeps

def _exact_uniform_mle_risk(S: int, n: int) -> float:
    return estimator_risk_exact(_uniform_family(S), empirical_estimator(), n)


def _entropy_ball_risk(H: float, c: float, n: int, est_name: str, eta: float) -> float:
    fam = entropy_ball_family(H, c * H / math.log(n)).family
    return estimator_risk_exact(fam, _build_estimator(est_name, n, eta), n)


def _verdicts_cor2(args, rows):
    S_values = args.grid_S or [2]
    ns = sorted(args.grid_n or [100, 1_000, 10_000])
    verdicts = []
    for S in S_values:
        target = bnd.classical_constant(S)
        gaps = []
        for n in ns:
            risk = _exact_uniform_mle_risk(S, n)
            gaps.append(abs(math.sqrt(n) * risk - target))
            rows.append(ReportRow(
                params={"S": S, "n": n, "family": "uniform", "estimator": "empirical"},
                exact_risk=risk,
                bounds={"classical_constant": target,
                        "mle_upper_simple": bnd.mle_upper_simple(S, n),
                        "mle_upper_tight": bnd.mle_upper_tight(S, n)},
                seed=args.seed))
        verdicts.append((gaps[-1] <= 0.01,
                         f"S={S}: final |sqrt(n) risk - constant| = {gaps[-1]:.3e} <= 0.01"))
        decreasing = all(a > b for a, b in zip(gaps, gaps[1:]))
        verdicts.append((decreasing, f"S={S}: gap decreases monotonically over n={ns}"))
    return verdicts


def _verdicts_cor34(args, rows):
    cs = args.grid_c or [1.0, 2.0, 4.0, 8.0]
    ns = sorted(args.grid_n or [1_000, 10_000])
    floor_constant = math.sqrt(_E) / 8.0
    upper_ok, lower_ok = True, True
    for c, n in itertools.product(cs, ns):
        S = max(2, round(n / c))
        risk = _exact_uniform_mle_risk(S, n)
        oracle = bayes_risk_two_point(two_point_prior(S, n))
        scaled_risk = math.sqrt(c) * risk
        scaled_oracle = math.sqrt(c) * oracle
        upper_ok &= scaled_risk <= 1.0 + 1e-12
        lower_ok &= scaled_oracle >= floor_constant - 0.02
        rows.append(ReportRow(
            params={"S": S, "c": c, "n": n, "family": "uniform", "estimator": "empirical"},
            exact_risk=risk,
            bounds={"mle_upper_simple": bnd.mle_upper_simple(S, n)},
            seed=args.seed))
    return [
        (upper_ok, "sqrt(c) * exact uniform risk <= 1 at every linear-scaling cell"),
        (lower_ok, f"sqrt(c) * two-point Bayes oracle >= sqrt(e)/8 - 0.02 "
                   f"(= {floor_constant - 0.02:.4f}) at every cell"),
    ]


def _trend_ratios(args, est_name: str, eta: float):
    H_values = args.grid_H or [1.0]
    cs = args.grid_c or [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    ns = sorted(args.grid_n or [10**3, 10**4, 10**5, 10**6, 10**7])
    out = []
    for H in H_values:
        ratios = []
        for n in ns:
            best = max(_entropy_ball_risk(H, c, n, est_name, eta) for c in cs)
            ratios.append(math.log(n) * best / H)
        out.append((H, ns, ratios))
    return out


def _verdicts_cor6(args, rows):
    eta = (args.grid_eta or [1.1])[0]
    verdicts = []
    for H, ns, ratios in _trend_ratios(args, "empirical", eta):
        for n, ratio in zip(ns, ratios):
            rows.append(ReportRow(
                params={"H": H, "n": n, "family": "entropy-ball", "estimator": "empirical"},
                exact_risk=ratio * H / math.log(n), seed=args.seed))
        increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
        verdicts.append((increasing,
                         f"H={H}: ln(n) * max-c MLE risk / H increases over n={ns}"))
        verdicts.append((ratios[-1] > 1.0,
                         f"H={H}: final ratio {ratios[-1]:.4f} exceeds 1.0"))
    return verdicts


def _verdicts_cor7(args, rows):
    eta = (args.grid_eta or [1.1])[0]
    verdicts = []
    mle = _trend_ratios(args, "empirical", eta)
    thr = _trend_ratios(args, "threshold", eta)
    for (H, ns, mle_ratios), (_, _, thr_ratios) in zip(mle, thr):
        below = True
        compared = []
        for n, mle_r, thr_r in zip(ns, mle_ratios, thr_ratios):
            upper = bnd.threshold_upper(H, n, eta)
            both_valid = (not upper.vacuous
                          and not bnd.mle_entropy_upper(H, n, eta).vacuous)
            rows.append(ReportRow(
                params={"H": H, "eta": eta, "n": n, "family": "entropy-ball",
                        "estimator": "threshold"},
                exact_risk=thr_r * H / math.log(n),
                bounds={"threshold_upper": upper.value},
                vacuous={"threshold_upper": upper.vacuous},
                seed=args.seed))
            if both_valid:
                compared.append(n)
                below &= thr_r < mle_r
        verdicts.append((below and bool(compared),
                         f"H={H}: threshold ratio < MLE ratio at every valid n "
                         f"(compared at n={compared})"))
    return verdicts


def _verdicts_cor9(args, rows):
    H_values = args.grid_H or [1.0]
    cs = args.grid_c or [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    ns = sorted(args.grid_n or [10**3, 10**4, 10**5, 10**6, 10**7])
    k = 10**6
    verdicts = []
    for H in H_values:
        ratios = []
        dominated = True
        for n in ns:
            best = -math.inf
            for c in cs:
                fam = entropy_ball_family(H, c * H / math.log(n))
                prior = CompositePrior.from_family(fam, k)
                value = bayes_risk_entropy_ball_constrained(prior, n)
                best = max(best, value)
                floor = bnd.simplex_lower(H, n, c)
                if not floor.vacuous:
                    dominated &= value >= floor.value * (1.0 - 1.0 / k)
            ratios.append(math.log(n) * best / H)
            rows.append(ReportRow(
                params={"H": H, "n": n, "family": "entropy-ball", "estimator": "empirical"},
                exact_risk=best, seed=args.seed))
        increasing = all(a < b for a, b in zip(ratios, ratios[1:]))
        verdicts.append((increasing,
                         f"H={H}: ln(n) * simplex-constrained oracle / H increases over n={ns}"))
        verdicts.append((ratios[-1] > 1.0,
                         f"H={H}: final constrained ratio {ratios[-1]:.4f} exceeds 1.0"))
        verdicts.append((dominated,
                         f"H={H}: constrained oracle dominates simplex floor * (1 - 1/k)"))
    return verdicts


_REPRODUCE_TARGETS = {
    "cor2": _verdicts_cor2,
    "cor3-4": _verdicts_cor34,
    "cor6": _verdicts_cor6,
    "cor7": _verdicts_cor7,
    "cor9": _verdicts_cor9,
}


def cmd_reproduce(args) -> int:
    rows: list = []
    verdicts = _REPRODUCE_TARGETS[args.target](args, rows)
    if args.out is not None:
        write_report(rows, args.format, args.out)
    failed = False
    for ok, description in verdicts:
        print(("PASS" if ok else "FAIL") + f" [{args.target}] {description}")
        failed |= not ok
    return 1 if failed else 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-H", dest="grid_H", type=float, nargs="+",
                        help="entropy budget values (nats)")
    common.add_argument("--grid-n", dest="grid_n", type=int, nargs="+",
                        help="sample sizes")
    common.add_argument("--grid-S", dest="grid_S", type=int, nargs="+",
                        help="support sizes")
    common.add_argument("--grid-c", dest="grid_c", type=float, nargs="+",
                        help="lower-bound tuning constants in (0, 1)")
    common.add_argument("--grid-zeta", dest="grid_zeta", type=float, nargs="+",
                        help="high-dimensional slack values in (0, 1]")
    common.add_argument("--grid-eta", dest="grid_eta", type=float, nargs="+",
                        help="threshold exponents (> 1)")
    common.add_argument("--estimator", action="append",
                        choices=["empirical", "threshold"],
                        help="estimator(s) to evaluate; repeatable")
    common.add_argument("--family", default=None,
                        help="uniform | entropy-ball | file:PATH")
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--replicates", type=int, default=10_000,
                        help="Monte-Carlo replicates per cell")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--timing", action="store_true",
                        help="record wall-clock per cell (breaks byte-identical reruns)")

    parser = argparse.ArgumentParser(
        prog="l1minimax",
        description="Estimators, exact risks and minimax bounds for discrete "
                    "distribution estimation under l1 loss.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bounds", parents=[common],
                   help="evaluate closed-form bounds on a parameter grid")
    sub.add_parser("exact-risk", parents=[common],
                   help="exact estimator risk on named families")
    sub.add_parser("mc", parents=[common],
                   help="Monte-Carlo risk with exact cross-check")
    repro = sub.add_parser("reproduce", parents=[common],
                           help="scripted trend sweeps with PASS/FAIL verdicts")
    repro.add_argument("target", choices=sorted(_REPRODUCE_TARGETS),
                       help="which scripted sweep to run")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"bounds": cmd_bounds, "exact-risk": cmd_exact_risk,
                "mc": cmd_mc, "reproduce": cmd_reproduce}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
