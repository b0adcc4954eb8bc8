"""Command-line front-end: parse auction specs, dispatch solvers, emit results.

Exit codes: 0 success, 1 validation/solve failure, 2 usage or input error.
Exact rationals are serialized as "p/q" strings; float output is tagged with
an explicit precision field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import blackbox, discrete, explicit, verify
from .cdf import CdfOracle, cdf_from_json, oracle_from_piecewise
from .discrete import BidGrid, JumpPointStrategy, SolveParams
from .errors import DomainError, PrecisionError
from .rationals import format_rational, parse_rational

USAGE_ERROR = 2
FAILURE = 1


class InputError(Exception):
    pass


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"{what}: file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: malformed JSON in {path}: {exc}")


def _load_cdf(path: str):
    try:
        return cdf_from_json(_load_json(path, "cdf"))
    except DomainError as exc:
        raise InputError(f"cdf: {exc}")


def _parse_bids(text: str) -> BidGrid:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bids: malformed JSON array: {exc}")
    if not isinstance(raw, list):
        raise InputError("bids: expected a JSON array of rationals")
    try:
        return BidGrid(tuple(parse_rational(b) for b in raw))
    except (ValueError, DomainError) as exc:
        raise InputError(f"bids: {exc}")


def _default_delta() -> Fraction | None:
    bits = os.environ.get("FPA_PRECISION_BITS")
    return Fraction(1, 2 ** int(bits)) if bits else None


def _strategy_to_json(strategy: JumpPointStrategy, cert=None) -> dict:
    out = {
        "kind": "jump_points",
        "s": [format_rational(Fraction(x)) for x in strategy.s],
        "U": [format_rational(Fraction(u)) for u in strategy.utilities],
    }
    if cert is not None:
        out["certificate"] = {
            "gamma": format_rational(Fraction(cert.gamma)),
            "pass": cert.passed,
            "max_residual": format_rational(Fraction(cert.max_residual)),
        }
    return out


def _strategy_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "jump_points":
        try:
            return JumpPointStrategy(
                tuple(parse_rational(x) for x in obj["s"]),
                tuple(parse_rational(u) for u in obj.get("U", [])),
            )
        except (KeyError, ValueError) as exc:
            raise InputError(f"strategy: bad jump_points object ({exc})")
    if kind == "rational_bid_function":
        try:
            return explicit.rbf_from_json(obj)
        except (KeyError, ValueError, DomainError) as exc:
            raise InputError(f"strategy: bad rational_bid_function object ({exc})")
    raise InputError(f"strategy: unknown kind field {kind!r}")


def _cmd_solve(args) -> int:
    dist = _load_cdf(args.cdf)
    report = dist.validate()
    if not report.ok:
        print("invalid cdf:", "; ".join(report.violations), file=sys.stderr)
        return FAILURE
    if args.model == "ccfpa-explicit":
        rbf = explicit.canonical_bid_function(dist, args.n)
        if args.at is not None:
            x = parse_rational(args.at)
            if args.no_extend and x < rbf.support_infimum:
                print(f"value {args.at} below the support infimum "
                      f"{format_rational(rbf.support_infimum)} (extension disabled)",
                      file=sys.stderr)
                return FAILURE
            print(format_rational(explicit.eval_canonical(rbf, x)))
        elif args.samples:
            print("x,bid")
            for i in range(args.samples + 1):
                x = Fraction(i, args.samples)
                print(f"{float(x)},{float(explicit.eval_canonical(rbf, x))}")
        else:
            print(json.dumps(explicit.rbf_to_json(rbf), indent=2))
        return 0
    if args.model == "ccfpa-blackbox":
        if args.eps is None:
            raise InputError("--eps is required for ccfpa-blackbox")
        oracle = oracle_from_piecewise(dist)
        plan = blackbox.precompute(oracle, args.n, parse_rational(args.eps))
        samples = args.samples or 100
        print("x,bid,L,U,queries")
        for i in range(samples + 1):
            x = Fraction(i, samples)
            ev = blackbox.bid(plan, oracle, x)
            print(f"{float(x)},{float(ev.bid)},{float(ev.lower)},{float(ev.upper)},{oracle.query_count}")
        return 0
    # cdfpa
    if args.bids is None:
        raise InputError("--bids is required for the cdfpa model")
    if args.eps is None:
        raise InputError("--eps is required for the cdfpa model")
    grid = _parse_bids(args.bids)
    delta = parse_rational(args.delta) if args.delta else _default_delta()
    params = SolveParams(delta=delta)
    try:
        result = discrete.solve(dist, None, args.n, grid, parse_rational(args.eps), params)
    except PrecisionError as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return FAILURE
    out = _strategy_to_json(result.strategy, result.certificate)
    if args.certify:
        report = verify.epsilon_bne_check_cdfpa(dist, args.n, grid, result.strategy)
        out["measured_regret"] = format_rational(Fraction(report.max_regret))
    print(json.dumps(out, indent=2))
    return 0


def _cmd_verify(args) -> int:
    dist = _load_cdf(args.cdf)
    strategy = _strategy_from_json(_load_json(args.strategy, "strategy"))
    if args.mode == "exact":
        if args.bids is None:
            raise InputError("--bids is required in exact mode")
        if not isinstance(strategy, JumpPointStrategy):
            raise InputError("exact mode needs a jump_points strategy")
        grid = _parse_bids(args.bids)
        report = verify.epsilon_bne_check_cdfpa(dist, args.n, grid, strategy)
        out = {
            "max_regret": format_rational(Fraction(report.max_regret)),
            "argmax": {
                "value": format_rational(Fraction(report.argmax[0])),
                "bid": format_rational(Fraction(report.argmax[1])),
            },
            "method": report.method,
        }
    elif args.mode == "grid":
        if isinstance(strategy, JumpPointStrategy):
            if args.bids is None:
                raise InputError("--bids is required for jump_points strategies")
            bid_fn = strategy.as_bid_function(_parse_bids(args.bids))
        else:
            bid_fn = strategy
        report = verify.epsilon_bne_check_ccfpa(dist, args.n, bid_fn)
        out = {
            "max_regret": report.max_regret,
            "argmax": {"value": report.argmax[0], "bid": report.argmax[1]},
            "method": report.method,
            "precision": "float64",
        }
    else:  # mc
        grid = _parse_bids(args.bids) if args.bids else None
        if isinstance(strategy, JumpPointStrategy) and grid is None:
            raise InputError("--bids is required for jump_points strategies")
        report = verify.monte_carlo_regret(dist, args.n, strategy, args.trials, args.seed, grid)
        out = {
            "max_regret": report.max_regret,
            "argmax": {"value": report.argmax[0], "bid": report.argmax[1]},
            "method": report.method,
            "trials": report.trials,
            "seed": report.seed,
            "sigma": report.sigma,
            "precision": "float64",
        }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_eval(args) -> int:
    x = parse_rational(args.at)
    if args.strategy:
        strategy = _strategy_from_json(_load_json(args.strategy, "strategy"))
        if isinstance(strategy, JumpPointStrategy):
            if args.bids is None:
                raise InputError("--bids is required for jump_points strategies")
            grid = _parse_bids(args.bids)
            print(format_rational(grid.bids[strategy.bid_index(x) - 1]))
        else:
            print(format_rational(explicit.eval_canonical(strategy, x)))
        return 0
    if args.cdf is None:
        raise InputError("need --cdf or --strategy")
    dist = _load_cdf(args.cdf)
    print(format_rational(dist(x)))
    return 0


def _cmd_query_stats(args) -> int:
    dist = _load_cdf(args.cdf)
    oracle = oracle_from_piecewise(dist)
    eps = parse_rational(args.eps)
    plan = blackbox.precompute(oracle, args.n, eps)
    precompute_queries = oracle.query_count
    for i in range(args.samples):
        blackbox.bid(plan, oracle, Fraction(i, max(args.samples - 1, 1)))
    bid_queries = oracle.query_count - precompute_queries
    budget = plan.K + 1
    out = {
        "K": plan.K,
        "precompute_queries": precompute_queries,
        "bid_evaluations": args.samples,
        "bid_queries": bid_queries,
        "total": oracle.query_count,
        "budget_per_evaluation": budget,
        "within_budget": precompute_queries + 1 <= budget,
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_validate_cdf(args) -> int:
    dist = _load_cdf(args.cdf)
    report = dist.validate_exact_monotone() if args.exact else dist.validate()
    print(json.dumps({"ok": report.ok, "violations": list(report.violations)}, indent=2))
    return 0 if report.ok else FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpaeq",
        description="First-price auction equilibrium solvers and verifiers",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute an equilibrium strategy")
    p.add_argument("--model", required=True, choices=["ccfpa-blackbox", "ccfpa-explicit", "cdfpa"])
    p.add_argument("--cdf", required=True, help="path to a cdf JSON file")
    p.add_argument("--n", required=True, type=int, help="number of bidders (>= 2)")
    p.add_argument("--eps", help="approximation accuracy (rational)")
    p.add_argument("--at", help="evaluate the bid at one rational value (ccfpa-explicit)")
    p.add_argument("--samples", type=int, help="emit a CSV sample of the bid function")
    p.add_argument("--bids", help="JSON array of rational bids (cdfpa)")
    p.add_argument("--delta", help="inner precision override (cdfpa)")
    p.add_argument("--certify", action="store_true", help="also measure regret (cdfpa)")
    p.add_argument("--no-extend", action="store_true",
                   help="reject values below the support infimum (ccfpa-explicit)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="certify a strategy's regret")
    p.add_argument("--strategy", required=True, help="path to a strategy JSON file")
    p.add_argument("--cdf", required=True)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--bids", help="JSON array of rational bids")
    p.add_argument("--mode", required=True, choices=["exact", "grid", "mc"])
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("eval", help="evaluate a cdf or strategy at a point")
    p.add_argument("--cdf")
    p.add_argument("--strategy")
    p.add_argument("--bids")
    p.add_argument("--at", required=True)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("query-stats", help="oracle query accounting for the black-box solver")
    p.add_argument("--cdf", required=True)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--eps", required=True)
    p.add_argument("--samples", type=int, default=10)
    p.set_defaults(func=_cmd_query_stats)

    p = sub.add_parser("validate-cdf", help="check a cdf JSON file's invariants")
    p.add_argument("--cdf", required=True)
    p.add_argument("--exact", action="store_true", help="exact derivative-sign monotonicity check")
    p.set_defaults(func=_cmd_validate_cdf)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except PrecisionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILURE


if __name__ == "__main__":
    sys.exit(main())
