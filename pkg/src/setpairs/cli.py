"""Command-line interface.

Exit codes: 0 success / clean / conclusive, 1 a check failed, 2 usage, parse
or resource errors, 3 inconclusive search.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import biclique as bq
from .constructions import (
    ResourceError,
    complementary_five_cycles,
    pad_to_sizes,
    standard_example,
)
from .core import (
    CROSS,
    ONE_CROSS,
    MalformedQuery,
    SystemFormatError,
    dumps_system,
    format_fraction,
    fraction_json,
    loads_system,
    parse_label,
    reduce,
    sigma,
    verify,
)
from .lemmas import (
    DEFAULT_SEED,
    PreconditionError,
    identity_sweep,
    induction_identity,
    ratio_bound_scan,
    reduction_is_safe,
)
from .search import (
    INCONCLUSIVE,
    SearchConfig,
    bound_audit,
    default_threads,
    exists_system,
    max_m,
    write_certificates,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write_text(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(args, payload: dict, human: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(human)


def _pair_list(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}") from None
    return a, b


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    s = loads_system(_read_text(args.input))
    report = verify(s, args.mode)
    lines = [f"{args.mode}: {'clean' if report.clean else 'VIOLATIONS'} ({len(s)} pairs)"]
    for v in report.violations:
        w = ",".join(str(e) for e in sorted(v.witness_elements, key=str))
        lines.append(f"  {v.condition} i={v.i} j={v.j} witness={{{w}}}")
    _emit(args, report.to_json(), "\n".join(lines))
    return EXIT_OK if report.clean else EXIT_FAIL


def cmd_sigma(args) -> int:
    s = loads_system(_read_text(args.input))
    value = sigma(s)
    _emit(
        args,
        {"sigma": fraction_json(value), "approx": float(value), "pairs": len(s)},
        f"sigma = {format_fraction(value)}",
    )
    return EXIT_OK


def cmd_construct(args) -> int:
    if args.kind == "standard":
        if args.a is None or args.b is None:
            raise UsageError("construct standard needs --a and --b")
        s = standard_example(args.a, args.b)
    else:
        s = complementary_five_cycles()
    if args.pad is not None:
        s = pad_to_sizes(s, [args.pad] * len(s))
    _write_text(dumps_system(s), args.output)
    return EXIT_OK


def _describe_outcome(o, timing: bool) -> str:
    c = o.config
    st = o.stats
    line = (
        f"a={c.a} b={c.b} m={c.m}: {o.status} "
        f"(nodes={st.nodes}, thickness prunes={st.prunes_thickness}, "
        f"coverage prunes={st.prunes_coverage}"
    )
    if timing:
        line += f", {st.elapsed:.3f}s"
    line += ")"
    if c.enumerate_all:
        line += f"\n  {len(o.witnesses)} non-isomorphic witness(es)"
    for k, w in enumerate(o.witnesses):
        pairs = "; ".join(
            "{" + ",".join(map(str, a)) + "}|{" + ",".join(map(str, b)) + "}"
            for a, b in w.to_lists()
        )
        line += f"\n  witness {k}: {pairs}"
    return line


def cmd_search(args) -> int:
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        raise UsageError("--threads must be positive")
    if args.max_m is not None:
        if args.enumerate:
            raise UsageError("--enumerate needs --m")
        res = max_m(
            args.a,
            args.b,
            args.max_m,
            node_limit=args.node_limit,
            threads=threads,
            symmetry_breaking=not args.no_symmetry_breaking,
        )
        if args.certificates:
            for o in res.outcomes:
                write_certificates(o, args.certificates)
        kind = "exact" if res.exact else "lower bound"
        if res.reached_cap:
            kind += ", cap reached"
        human = f"max m = {res.value} ({kind})\n" + "\n".join(
            _describe_outcome(o, args.timing) for o in res.outcomes
        )
        _emit(args, res.to_json(args.timing), human)
        return EXIT_OK if res.exact else EXIT_INCONCLUSIVE

    cfg = SearchConfig(
        args.a,
        args.b,
        args.m,
        node_limit=args.node_limit,
        enumerate_all=args.enumerate,
        symmetry_breaking=not args.no_symmetry_breaking,
        most_constrained=args.most_constrained,
    )
    out = exists_system(cfg, threads=threads)
    if args.certificates:
        write_certificates(out, args.certificates)
    _emit(args, out.to_json(args.timing), _describe_outcome(out, args.timing))
    return EXIT_INCONCLUSIVE if out.status == INCONCLUSIVE else EXIT_OK


def cmd_biclique(args) -> int:
    if args.action == "check":
        p = bq.loads_partition(_read_text(args.partition))
        if args.m is not None and args.m != p.m:
            raise UsageError(f"--m {args.m} does not match partition m={p.m}")
        report = bq.verify_partition(p)
        tx, ty = bq.thickness(p)
        payload = report.to_json()
        payload["thickness"] = {"x": tx, "y": ty}
        lines = [f"partition of B_{2 * p.m}: {'clean' if report.clean else 'VIOLATIONS'}"]
        lines += [
            f"  {v.kind} edge={v.edge} bicliques={list(v.bicliques)}" for v in report.violations
        ]
        lines.append(f"  thickness x={tx} y={ty}")
        _emit(args, payload, "\n".join(lines))
        return EXIT_OK if report.clean else EXIT_FAIL
    try:
        if args.action == "to-system":
            p = bq.loads_partition(_read_text(args.partition))
            text = dumps_system(bq.partition_to_system(p))
        else:
            s = loads_system(_read_text(args.input))
            text = bq.dumps_partition(bq.system_to_partition(s))
    except bq.PartitionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write_text(text, args.output)
    return EXIT_OK


def cmd_lemma(args) -> int:
    if args.lemma == "ratio":
        scan = ratio_bound_scan(args.max)
        human = (
            f"ratio scan 2..{args.max}: {'holds' if scan.ok else 'FAILS'} "
            f"({scan.cells} cells; max {format_fraction(scan.max_ratio)} at {scan.argmax}"
        )
        if scan.max_other is not None:
            human += f"; elsewhere max {format_fraction(scan.max_other)} at {scan.argmax_other}"
        human += ")"
        _emit(args, scan.to_json(), human)
        return EXIT_OK if scan.ok else EXIT_FAIL

    if args.lemma == "induction":
        if args.random is not None:
            if args.input is not None:
                raise UsageError("use either --input or --random")
            seed = DEFAULT_SEED if args.seed is None else args.seed
            sweep = identity_sweep(args.random, seed)
            payload = {
                "seed": seed,
                "systems": sweep.count,
                "sides": ["A", "B"],
                "failures": len(sweep.failures),
                "holds": sweep.ok,
            }
            human = (
                f"seed={seed}: {sweep.count} random systems, both sides, "
                f"{len(sweep.failures)} failure(s)"
            )
            _emit(args, payload, human)
            return EXIT_OK if sweep.ok else EXIT_FAIL
        if args.input is None:
            raise UsageError("lemma induction needs --input or --random")
        s = loads_system(_read_text(args.input))
        rep = induction_identity(s, args.side)
        human = (
            f"side {rep.side}: sigma = {format_fraction(rep.lhs)}, "
            f"vertex average = {format_fraction(rep.rhs)}, "
            f"max = {format_fraction(rep.max_vertex_value)}: "
            f"{'holds' if rep.holds else 'FAILS'}"
        )
        _emit(args, rep.to_json(), human)
        return EXIT_OK if rep.holds else EXIT_FAIL

    s = loads_system(_read_text(args.input))
    r = {parse_label(x) for x in args.remove.split(",") if x}
    safety = reduction_is_safe(s, r)
    payload = {"safe": safety.safe, "witness": None}
    if safety.safe:
        before = verify(s, ONE_CROSS).clean
        after = verify(reduce(s, r), ONE_CROSS).clean
        payload["one_cross_before"] = before
        payload["one_cross_after"] = after
        human = f"safe; 1-cross before={before} after={after}"
        ok = after or not before
    else:
        v, i, j = safety.witness
        payload["witness"] = {"element": str(v), "i": i, "j": j}
        human = f"unsafe: {v} lies in A_{i} and B_{j}"
        ok = False
    _emit(args, payload, human)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_audit(args) -> int:
    s = loads_system(_read_text(args.input))
    rep = bound_audit(s)
    lines = [f"sigma = {format_fraction(rep.sigma)}"]
    if rep.bollobas_applicable:
        lines.append(f"  cross intersecting: sigma <= 1, slack {fraction_json(rep.bollobas_slack)}"
                     f" {'ok' if rep.bollobas_ok else 'FAILED'}")
    else:
        lines.append("  not cross intersecting: Bollobas bound not applicable")
    if rep.one_cross_applicable:
        lines.append(f"  1-cross, sizes >= 2: sigma <= 29/30, slack "
                     f"{fraction_json(rep.one_cross_slack)} {'ok' if rep.one_cross_ok else 'FAILED'}")
        lines.append(f"  slack against 5/6 (informational): {fraction_json(rep.five_sixths_slack)}")
    else:
        lines.append("  29/30 bound not applicable")
    _emit(args, rep.to_json(), "\n".join(lines))
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")

    parser = argparse.ArgumentParser(
        prog="setpairs", description="Exact tools for set pair systems."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check intersection conditions")
    p.add_argument("--input", required=True, help="system file, '-' for stdin")
    p.add_argument("--mode", choices=(CROSS, ONE_CROSS), required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sigma", parents=[common], help="exact weight of a system")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("construct", parents=[common], help="emit a built-in system")
    p.add_argument("kind", choices=("standard", "five-cycle"))
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--pad", type=_pair_list, metavar="A,B", help="pad every pair to sizes A,B")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", parents=[common], help="exhaustive extremal search")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--max-m", type=int, dest="max_m", metavar="CAP")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--node-limit", type=int, dest="node_limit")
    p.add_argument("--certificates", metavar="DIR")
    p.add_argument("--threads", type=int, help="worker processes (default $SETPAIR_THREADS or 1)")
    p.add_argument("--no-symmetry-breaking", action="store_true", dest="no_symmetry_breaking")
    p.add_argument("--most-constrained", action="store_true", dest="most_constrained")
    p.add_argument("--timing", action="store_true", help="include wall time in the output")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("biclique", help="crown graph partitions")
    bsub = p.add_subparsers(dest="action", required=True)
    q = bsub.add_parser("check", parents=[common])
    q.add_argument("--m", type=int)
    q.add_argument("--partition", required=True)
    q = bsub.add_parser("to-system", parents=[common])
    q.add_argument("--partition", required=True)
    q.add_argument("--output")
    q = bsub.add_parser("from-system", parents=[common])
    q.add_argument("--input", required=True)
    q.add_argument("--output")
    p.set_defaults(func=cmd_biclique)

    p = sub.add_parser("lemma", help="lemma checks")
    lsub = p.add_subparsers(dest="lemma", required=True)
    q = lsub.add_parser("ratio", parents=[common])
    q.add_argument("--max", type=int, required=True)
    q = lsub.add_parser("induction", parents=[common])
    q.add_argument("--input")
    q.add_argument("--side", choices=("A", "B"), default="A")
    q.add_argument("--random", type=int, metavar="N", help="check N seeded random systems")
    q.add_argument("--seed", type=int)
    q = lsub.add_parser("reduction", parents=[common])
    q.add_argument("--input", required=True)
    q.add_argument("--remove", required=True, metavar="E1,E2,...")
    p.set_defaults(func=cmd_lemma)

    p = sub.add_parser("audit", parents=[common], help="check the sigma bounds")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_audit)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (
        UsageError,
        SystemFormatError,
        MalformedQuery,
        PreconditionError,
        ResourceError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
