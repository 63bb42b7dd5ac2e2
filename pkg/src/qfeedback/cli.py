"""Command-line entry point.

States are written bottom-up: ``0,9`` means nine messages with full error
capacity and none with capacity 0.  Exit codes: 0 success or a true verdict,
1 a false verdict or failed verification, 2 usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds, channel, codec, solver, table
from .state import initial_state, parse_partition, parse_state

THREADS_ENV = "QFEEDBACK_THREADS"


class UsageError(Exception):
    pass


def _symbols(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad symbol list {text!r}") from exc


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_solve(args) -> int:
    s = solver.Solver(args.q, prune=not args.no_prune, node_limit=args.node_limit)
    win = s.wins(parse_state(args.state).counts, args.n)
    print("winning" if win else "losing")
    print(f"nodes={s.stats.nodes} cache_hits={s.stats.cache_hits}", file=sys.stderr)
    return 0 if win else 1


def cmd_strategy(args) -> int:
    s = solver.Solver(args.q, node_limit=args.node_limit)
    c = parse_state(args.state)
    if not s.wins(c.counts, args.n):
        print(f"{c.literal()} is losing with n={args.n}", file=sys.stderr)
        return 1
    tree = s.extract_strategy(c, args.n)
    _emit(json.dumps(solver.strategy_to_json(tree, args.q), separators=(",", ":")) + "\n", args.out)
    return 0


def cmd_bounds(args) -> int:
    q = args.q
    lines = []
    ok = True
    if args.state is not None:
        if args.n is None:
            raise UsageError("--state needs --n")
        c = parse_state(args.state)
        v = bounds.volume(c, args.n, q)
        ok = v <= q**args.n
        lines += [f"volume={v}", f"q^n={q**args.n}", f"volume_bound={'holds' if ok else 'fails'}"]
    elif args.M is not None and args.e is not None:
        M, e = args.M, args.e
        lines.append(f"converse_min_n={bounds.min_blocklength_converse(M, e, q)}")
        if q >= 3:
            n, i = table.achievable_blocklength(M, e, q)
            lines.append(f"table_n={n} table_row={i}")
        if args.n is not None:
            ok = bounds.translated_volume_bounds(M, e, q, args.n)
            lines.append(f"translated_bounds_at_n={'hold' if ok else 'fail'}")
    else:
        raise UsageError("give either --state/--n or --M/--e")
    print("\n".join(lines))
    return 0 if ok else 1


def cmd_rate_region(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be positive")
    grid = np.linspace(0.0, 0.5, args.points) if args.points > 1 else [0.0]
    _emit(bounds.rate_region_csv(bounds.emit_rate_region(args.q, grid)), args.out)
    return 0


def cmd_table(args) -> int:
    t = table.build_table(args.q, args.m, args.k)
    if args.csv:
        _emit(t.to_csv(), args.out)
    else:
        _emit(t.render() + "\n", args.out)
    if args.check:
        rep = table.verify_table(t)
        print("\n".join(rep.lines()), file=sys.stderr)
        return 0 if rep.ok else 1
    return 0


def _load_code(path: str) -> codec.FeedbackCode:
    return codec.code_from_json(json.loads(Path(path).read_text()))


def cmd_codec(args) -> int:
    if args.action == "build":
        if args.M is None or args.e is None:
            raise UsageError("codec build needs --M and --e")
        if args.via == "table":
            code = codec.build_from_table(args.M, args.e, args.q)
        else:
            s = solver.Solver(args.q, node_limit=args.node_limit)
            n = args.n if args.n is not None else solver.min_blocklength(
                args.M, args.e, args.q, s, start=bounds.min_blocklength_converse(args.M, args.e, args.q)
            )
            c = initial_state(args.M, args.e)
            if not s.wins(c.counts, n):
                print(f"no code for M={args.M}, e={args.e} with n={n}", file=sys.stderr)
                return 1
            code = codec.build_from_strategy(s.extract_strategy(c, n), args.M, args.e, args.q)
        _emit(json.dumps(codec.code_to_json(code), separators=(",", ":")) + "\n", args.out)
        print(f"n={code.n} rate={float(code.rate):.6f}", file=sys.stderr)
        return 0
    if args.code is None or args.received is None:
        raise UsageError("codec decode needs --code and --received")
    code = _load_code(args.code)
    try:
        print(codec.decode(code, _symbols(args.received)))
    except codec.NoUniqueSurvivor as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


def cmd_simulate(args) -> int:
    code = _load_code(args.code)
    received = _symbols(args.received) if args.received else None
    adv = channel.make_adversary(args.adversary, code.e, seed=args.seed, received=received)
    thetas = range(code.M) if args.theta is None else [args.theta]
    ok = True
    lines = [channel.TRANSCRIPT_HEADER]
    for th in thetas:
        tr = channel.simulate(code, adv, th, seed=args.seed)
        ok &= tr.ok
        lines.append(tr.line())
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    if args.code:
        code = _load_code(args.code)
        res = channel.exhaustive_verify(code, cap=args.cap, threads=args.threads)
        print(f"ok={str(res.ok).lower()} runs={res.runs} paths_per_message={res.paths_per_message}")
        if res.counterexample is not None:
            print(channel.TRANSCRIPT_HEADER, file=sys.stderr)
            print(res.counterexample.line(), file=sys.stderr)
        return 0 if res.ok else 1
    if args.state and args.partition and args.n is not None:
        good = bounds.conservation_check(parse_state(args.state), parse_partition(args.partition), args.n, args.q)
        print(f"conservation={'holds' if good else 'fails'}")
        return 0 if good else 1
    raise UsageError("verify needs --code, or --state/--partition/--n for a conservation check")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qfeedback",
        description="q-ary feedback codes against adversarial substitution errors. "
        "State literals are bottom-up: c0,c1,...,ce.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, q=True):
        if q:
            sp.add_argument("--q", type=int, default=3, help="alphabet size (default 3)")
        sp.add_argument("--out", help="write data here instead of standard output")

    sp = sub.add_parser("solve", help="decide whether a state is winning")
    common(sp)
    sp.add_argument("--state", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--node-limit", type=int, default=solver.DEFAULT_NODE_LIMIT, help="default 10^7")
    sp.add_argument("--no-prune", action="store_true", help="plain recursion, no shortcuts")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("strategy", help="export a winning strategy as JSON")
    common(sp)
    sp.add_argument("--state", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--node-limit", type=int, default=solver.DEFAULT_NODE_LIMIT)
    sp.set_defaults(func=cmd_strategy)

    sp = sub.add_parser("bounds", help="volume and translated converse bounds")
    common(sp)
    sp.add_argument("--state")
    sp.add_argument("--n", type=int)
    sp.add_argument("--M", type=int)
    sp.add_argument("--e", type=int)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("rate-region", help="CSV of the asymptotic curves on [0, 1/2]")
    common(sp)
    sp.add_argument("--points", type=int, default=101)
    sp.set_defaults(func=cmd_rate_region)

    sp = sub.add_parser("table", help="print or check the recursive table")
    common(sp)
    sp.add_argument("--m", type=int, default=6)
    sp.add_argument("--k", type=int, default=6)
    sp.add_argument("--csv", action="store_true")
    sp.add_argument("--check", action="store_true", help="verify every table property; exit 1 on failure")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("codec", help="build a code or decode a received word")
    common(sp)
    sp.add_argument("action", choices=["build", "decode"])
    sp.add_argument("--M", type=int)
    sp.add_argument("--e", type=int)
    sp.add_argument("--n", type=int, help="block length for solver codes (default: smallest)")
    sp.add_argument("--via", choices=["solver", "table"], default="solver")
    sp.add_argument("--node-limit", type=int, default=solver.DEFAULT_NODE_LIMIT)
    sp.add_argument("--code")
    sp.add_argument("--received", help="comma-separated received symbols")
    sp.set_defaults(func=cmd_codec)

    sp = sub.add_parser("simulate", help="run messages through an adversary")
    common(sp, q=False)
    sp.add_argument("--code", required=True)
    sp.add_argument("--theta", type=int)
    sp.add_argument("--adversary", choices=["silent", "greedy", "random", "scripted"], default="random")
    sp.add_argument("--received", help="symbols for the scripted adversary")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="exhaustive code check, or a volume conservation check")
    common(sp)
    sp.add_argument("--code")
    sp.add_argument("--cap", type=int, default=channel.DEFAULT_LEAF_CAP, help="default 10^7 runs")
    sp.add_argument("--threads", type=int, default=None, help=f"default from ${THREADS_ENV} or 1")
    sp.add_argument("--state")
    sp.add_argument("--partition")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_verify)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "threads", 0) is None:
        args.threads = _default_threads()
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (solver.SolverBudgetExceeded, channel.BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
