"""Command-line entry point: ``sumsetlab <command> ...``.

Exit status is 0 when every verdict passes, 1 when a check fails, and 2 for
usage, parse, precondition or resource errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Sequence

from . import __version__
from .abgroup import FiniteAbelianGroup, GroupSubset, e_transform, enumerate_subgroups, minkowski_sum, stabilizer
from .density import EventuallyPeriodicSet, lower_density, shnirelman_density
from .dyson import apply_transform, iterate_transform
from .errors import SumsetLabError
from .harness import InstanceGenerator, SUITES, get_suite, replay, run_suite, search_tight
from .intset import BoundedIntSet, hfold_sumset, shnirelman_sumset
from .ranksum import SetFamily, gamma_star, rank_profile

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dump(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def _range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("-")
        return (int(lo), int(hi or lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a' or 'a-b', got {text!r}") from None


# -- operation commands ----------------------------------------------------


def cmd_sumset(args: argparse.Namespace) -> int:
    if args.sets[0].lstrip().startswith("Z"):
        parts = [GroupSubset.decode(t) for t in args.sets]
        total = parts[0]
        for p in parts[1:]:
            total = minkowski_sum(total, p)
        out = total.encode()
    else:
        parts = [BoundedIntSet.decode(t) for t in args.sets]
        if args.h is not None:
            if len(parts) != 1:
                raise SumsetLabError("--h takes exactly one set")
            out = hfold_sumset(parts[0], args.h, args.bound).encode()
        else:
            out = shnirelman_sumset(parts, args.bound).encode()
    print(_dump({"sumset": out}) if args.json else out)
    return EXIT_OK


def cmd_phi(args: argparse.Namespace) -> int:
    fam = SetFamily.decode(args.family)
    prof = rank_profile(fam)
    gs = gamma_star(fam)
    if args.r is not None and args.m is not None:
        value = prof.table[args.r][args.m] if 1 <= args.r <= fam.n and 1 <= args.m <= fam.bound else None
        if value is None:
            raise SumsetLabError(f"need 1 <= r <= {fam.n} and 1 <= m <= {fam.bound}")
        print(_dump({"r": args.r, "m": args.m, "phi": value}) if args.json else value)
        return EXIT_OK
    rows = {r: prof.table[r][1:] for r in range(1, fam.n + 1)}
    if args.json:
        print(_dump({"family": fam.encode(), "gamma_star": str(gs), "phi": {str(r): v for r, v in rows.items()}}))
    else:
        print(f"gamma* = {gs}")
        for r, v in rows.items():
            print(f"phi_{r}: {' '.join(map(str, v))}")
    return EXIT_OK


def cmd_density(args: argparse.Namespace) -> int:
    S = EventuallyPeriodicSet.decode(args.ep)
    sigma, lower = shnirelman_density(S), lower_density(S)
    if args.json:
        print(_dump({"set": S.encode(), "shnirelman": str(sigma), "lower": str(lower)}))
    else:
        print(lower if args.lower else sigma)
    return EXIT_OK


def cmd_transform(args: argparse.Namespace) -> int:
    fam = SetFamily.decode(args.family)
    if args.trace:
        trace = iterate_transform(fam)
        sys.stdout.write(trace.to_jsonl())
    else:
        print(apply_transform(fam).to_json())
    return EXIT_OK


def cmd_etransform(args: argparse.Namespace) -> int:
    A, B = GroupSubset.decode(args.A), GroupSubset.decode(args.B)
    Ae, Be = e_transform(A, B, args.e)
    if args.json:
        print(_dump({"A": Ae.encode(), "B": Be.encode(), "e": args.e}))
    else:
        print(Ae.encode())
        print(Be.encode())
    return EXIT_OK


def cmd_stabilizer(args: argparse.Namespace) -> int:
    H = stabilizer(GroupSubset.decode(args.X))
    print(_dump({"stabilizer": str(H), "order": H.order}) if args.json else str(H))
    return EXIT_OK


def cmd_subgroups(args: argparse.Namespace) -> int:
    subs = enumerate_subgroups(FiniteAbelianGroup.decode(args.group))
    if args.json:
        print(_dump({"group": args.group, "subgroups": [str(H) for H in subs]}))
    else:
        for H in subs:
            print(H)
    return EXIT_OK


# -- suite commands --------------------------------------------------------


def _generator(args: argparse.Namespace) -> InstanceGenerator:
    suite = get_suite(args.suite)
    d = dict(suite.defaults)
    for name in ("g", "n", "threshold", "period"):
        if getattr(args, name) is not None:
            d[name] = getattr(args, name)
    if args.group:
        d["groups"] = tuple(args.group)
    for name in ("seed", "count", "max_order", "density", "budget"):
        if getattr(args, name) is not None:
            d[name] = getattr(args, name)
    mode = "random" if args.random else "exhaustive"
    if mode == "random" and not args.group:
        d.pop("groups", None)
    return InstanceGenerator(mode=mode, **d)


def cmd_check(args: argparse.Namespace) -> int:
    gen = _generator(args)
    sink = None
    if args.witness_log:
        try:
            sink = open(args.witness_log, "a", encoding="utf-8")
        except OSError as exc:
            logging.getLogger(__name__).error("cannot open witness log: %s", exc)
    try:
        report = run_suite(
            args.suite, gen, workers=args.workers, sink=sink, log_pass_every=args.log_pass, log_na=args.log_na
        )
    finally:
        if sink is not None:
            sink.close()
    if args.json:
        print(report.to_json())
    else:
        c = report.counts
        print(
            f"{report.suite}: {report.instances} instances, pass={c['pass']} fail={c['fail']} "
            f"not-applicable={c['not-applicable']} ({report.elapsed:.2f}s)"
        )
        for w in report.fails[:20]:
            print(f"  FAIL {w.instance} {_dump(w.detail)}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_search_tight(args: argparse.Namespace) -> int:
    gen = _generator(args)
    scanned, hits = search_tight(args.suite, gen)
    if args.witness_log:
        with open(args.witness_log, "a", encoding="utf-8") as f:
            for w in hits:
                f.write(w.to_json() + "\n")
    if args.json:
        print(_dump({"suite": args.suite, "config": gen.config(), "scanned": scanned, "equalities": [w.to_dict() for w in hits]}))
    else:
        print(f"{args.suite}: {len(hits)} equality cases among {scanned} instances")
        for w in hits[: args.limit]:
            print(f"  {w.instance} {_dump(w.detail)}")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    with open(args.file, encoding="utf-8") as f:
        results = replay(f)
    mismatched = [r for r in results if not r.reproduced]
    failing = [r for r in results if r.verdict == "fail"]
    if args.json:
        print(
            _dump(
                {
                    "replayed": len(results),
                    "reproduced": len(results) - len(mismatched),
                    "fails": len(failing),
                    "mismatches": [r.witness.to_dict() for r in mismatched],
                }
            )
        )
    else:
        for r in results:
            tag = "ok" if r.reproduced else "MISMATCH"
            print(f"{tag} {r.witness.suite} {r.witness.instance} logged={r.witness.verdict} now={r.verdict}")
    return EXIT_FAIL if mismatched or failing else EXIT_OK


# -- parser ----------------------------------------------------------------


def _add_generator_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("suite", choices=sorted(SUITES), metavar="suite", help=f"one of: {', '.join(SUITES)}")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="enumerate every instance (default)")
    mode.add_argument("--random", action="store_true", help="draw --count seeded random instances")
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--g", type=_range, help="bound range, e.g. 1-6")
    p.add_argument("--n", type=_range, help="family size range, e.g. 2-3")
    p.add_argument("--group", action="append", help="group such as Z6 or Z2xZ4 (repeatable)")
    p.add_argument("--max-order", type=int, dest="max_order", help="random groups up to this order")
    p.add_argument("--density", type=float, help="membership probability in random mode")
    p.add_argument("--threshold", type=_range, help="eventually periodic threshold range")
    p.add_argument("--period", type=_range, help="period range")
    p.add_argument("--budget", type=int, help="refuse exhaustive streams larger than this")
    p.add_argument("--witness-log", dest="witness_log", help="append witnesses to this JSON lines file")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="sumsetlab", description="Sumsets, densities and addition theorems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sumset", parents=[common], help="sumset of bounded sets or group subsets")
    p.add_argument("sets", nargs="+", help="'g:{..}' bounded sets or 'Zm:{..}' group subsets")
    p.add_argument("--h", type=int, help="h-fold sumset of a single set")
    p.add_argument("--bound", type=int, help="truncation bound (default: smallest input bound)")
    p.set_defaults(func=cmd_sumset)

    p = sub.add_parser("phi", parents=[common], help="rank-r counting table of a family")
    p.add_argument("--family", required=True, help="e.g. 'g=5;{1,2};{1}'")
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("density", parents=[common], help="densities of an eventually periodic set")
    p.add_argument("--ep", required=True, help="e.g. '0:{}|2:{1}'")
    p.add_argument("--lower", action="store_true", help="print the lower asymptotic density")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("transform", parents=[common], help="one Dyson transform step, or a full trace")
    p.add_argument("--family", required=True)
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("etransform", parents=[common], help="the e-transform of a pair of group subsets")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("--e", type=int, required=True)
    p.set_defaults(func=cmd_etransform)

    p = sub.add_parser("stabilizer", parents=[common], help="stabilizer of a group subset")
    p.add_argument("X")
    p.set_defaults(func=cmd_stabilizer)

    p = sub.add_parser("subgroups", parents=[common], help="every subgroup of a group")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("check", parents=[common], help="run a verification suite")
    _add_generator_flags(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--log-pass", type=int, default=0, dest="log_pass", metavar="K", help="log every K-th pass")
    p.add_argument("--log-na", action="store_true", dest="log_na", help="log not-applicable verdicts")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search-tight", parents=[common], help="collect equality cases of a suite's inequality")
    _add_generator_flags(p)
    p.add_argument("--limit", type=int, default=20, help="cases to print in text mode")
    p.set_defaults(func=cmd_search_tight)

    p = sub.add_parser("replay", parents=[common], help="re-evaluate a witness log")
    p.add_argument("file")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (SumsetLabError, ValueError, OSError) as exc:
        print(f"sumsetlab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
