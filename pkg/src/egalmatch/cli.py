"""``egal-match`` command line: solve, compare and verify.

Exit codes: 0 ok, 1 input error, 2 infeasible or limit exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import algorithms, fpt, oracle, special, verify
from .core import (
    InstanceClassError,
    InvalidInstanceError,
    InvariantError,
    LimitExceededError,
    Instance,
    evaluate,
    format_rational,
    pad_goods,
)
from .formats import dumps, load_instance, result_to_json
from .graphs import describe_flow_network

EXIT_OK, EXIT_INPUT, EXIT_LIMIT, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; that code is reserved for limits here.
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_budget(text: str | None) -> oracle.Limits:
    base = oracle.Limits.from_env()
    if text is None:
        return base
    try:
        if ":" in text:
            a, b = text.split(":", 1)
            return oracle.Limits(int(a), int(b))
        return oracle.Limits(base.matchings, int(text))
    except ValueError:
        raise InvalidInstanceError(f"--budget expects STATES or MATCHINGS:STATES, got {text!r}") from None


def _load(args) -> Instance:
    inst = load_instance(args.instance)
    if args.round is not None:
        if args.round < 1:
            raise InvalidInstanceError("--round must be at least 1")
        inst = inst.with_rounds(args.round)
    return inst


def _options(args) -> algorithms.Options:
    return algorithms.Options(fpt_limit=args.fpt_limit, limits=parse_budget(args.budget))


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
    fmt = lambda r: "  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([fmt(header), fmt(["-" * w for w in widths])] + [fmt(r) for r in rows]) + "\n"


def _network_dump(inst: Instance, name: str, final: Fraction) -> dict:
    work = pad_goods(inst)
    if name == "binary":
        net = special.binary_network(work, int(final))
    elif name == "two-goods":
        net = special.two_goods_network(work, special.infer_partition(work), final)
    else:
        raise InvalidInstanceError("--dump-network applies to the binary and two-goods algorithms only")
    return describe_flow_network(net)


def cmd_solve(args) -> int:
    inst = _load(args)
    res = algorithms.solve(inst, args.alg, _options(args))
    doc = result_to_json(inst, res)
    if args.dump_network:
        final = evaluate(pad_goods(inst), res.sequence).bottlenecks[-1]
        sys.stderr.write(dumps(_network_dump(inst, args.alg, final)))
    if args.format == "json":
        _emit(dumps(doc), args.out)
    else:
        rows = [[str(r["t"]), " ".join(r["values"]), r["bottleneck"]] for r in doc["perRound"]]
        text = f"algorithm: {res.algorithm}\nguarantee: {res.guarantee} (slack {format_rational(res.slack)})\n"
        seq = " ".join("(" + ",".join("-" if g is None else str(g) for g in mt) + ")" for mt in doc["sequence"])
        _emit(text + f"sequence: {seq}\n" + _table(["t", "values", "bottleneck"], rows), args.out)
    return EXIT_OK


def applicable_algorithms(inst: Instance, fpt_limit: int) -> list[str]:
    """Algorithms whose instance class covers ``inst``, in registry order."""
    work = pad_goods(inst)
    names = ["approx", "anytime-approx"]
    if inst.n <= fpt_limit:
        names.append("fpt")
    if special.is_binary(inst):
        names.append("binary")
    try:
        special.infer_partition(work)
        names.append("two-goods")
    except InstanceClassError:
        pass
    if special.is_identical(inst):
        if inst.T % inst.n == 0:
            names.append("identical-exact")
        names.append("identical-greedy")
    if inst.n == 2:
        names.append("two-agent-anytime")
    return names


def compare_rows(inst: Instance, names: Sequence[str], opts: algorithms.Options, with_oracle: bool) -> dict:
    """Per-round bottlenecks per algorithm; with the oracle, gaps and bound flags too.

    Final-round guarantees are only checked at ``t = T``.
    """
    work = pad_goods(inst)
    results = {name: algorithms.solve(inst, name, opts) for name in names}
    trajectories = {name: evaluate(work, r.sequence).bottlenecks for name, r in results.items()}
    opts_t = oracle.opt_values(work, None, opts.limits) if with_oracle else None
    rows = []
    for t in range(inst.T):
        row = {"t": t + 1, "bottleneck": {n: format_rational(trajectories[n][t]) for n in names}}
        if opts_t is not None:
            row["opt"] = format_rational(opts_t[t])
            row["gap"], row["withinBound"] = {}, {}
            for name in names:
                gap = opts_t[t] - trajectories[name][t]
                row["gap"][name] = format_rational(gap)
                anytime = algorithms.get(name).anytime
                row["withinBound"][name] = gap <= results[name].slack if anytime or t + 1 == inst.T else None
        rows.append(row)
    return {
        "algorithms": list(names),
        "slack": {n: format_rational(results[n].slack) for n in names},
        "perRound": rows,
    }


def cmd_compare(args) -> int:
    inst = _load(args)
    opts = _options(args)
    names = args.alg or applicable_algorithms(inst, opts.fpt_limit)
    for name in names:
        algorithms.get(name)
    doc = compare_rows(inst, names, opts, args.with_oracle)
    if args.format == "json":
        _emit(dumps(doc), args.out)
        return EXIT_OK
    header = ["t"] + list(names)
    if args.with_oracle:
        header += ["OPT"] + [f"gap:{n}" for n in names] + [f"ok:{n}" for n in names]
    flag = {True: "yes", False: "NO", None: "-"}
    rows = []
    for r in doc["perRound"]:
        line = [str(r["t"])] + [r["bottleneck"][n] for n in names]
        if args.with_oracle:
            line += [r["opt"]] + [r["gap"][n] for n in names] + [flag[r["withinBound"][n]] for n in names]
        rows.append(line)
    slack = "slack: " + ", ".join(f"{n}={doc['slack'][n]}" for n in names) + "\n"
    _emit(_table(header, rows) + slack, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run(args.seed, args.count, golden_dir=args.golden, limits=parse_budget(args.budget))
    _emit(report.render(), args.out)
    return EXIT_OK if report.ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="egal-match", description="Egalitarian repeated matching solvers.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("instance", help="instance JSON file")
        sp.add_argument("--round", type=int, help="solve for this many rounds instead of the file's T")
        sp.add_argument("--fpt-limit", type=int, default=fpt.DEFAULT_FPT_LIMIT, help="largest n for fpt")
        sp.add_argument("--budget", help="oracle budget: STATES or MATCHINGS:STATES")
        sp.add_argument("--out", help="write the report here instead of stdout")

    s = sub.add_parser("solve", help="run one algorithm and report per-round values")
    common(s)
    s.add_argument("--alg", required=True, choices=list(algorithms.ALGORITHMS))
    s.add_argument("--format", choices=["json", "table"], default="json")
    s.add_argument("--dump-network", action="store_true",
                   help="print the flow network at the optimum to stderr (binary, two-goods)")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("compare", help="per-round table over several algorithms")
    common(c)
    c.add_argument("--alg", action="append", choices=list(algorithms.ALGORITHMS),
                   help="algorithm to include (repeatable; default: all applicable)")
    c.add_argument("--with-oracle", action="store_true", help="add OPT(t), gaps and bound flags")
    c.add_argument("--format", choices=["json", "table"], default="table")
    c.set_defaults(func=cmd_compare)

    v = sub.add_parser("verify", help="check invariants on the seeded corpus and golden files")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--count", type=int, default=20, help="instances per corpus kind")
    v.add_argument("--golden", help="directory of golden files (default: the bundled set)")
    v.add_argument("--budget", help="oracle budget: STATES or MATCHINGS:STATES")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    except (InvalidInstanceError, InstanceClassError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except LimitExceededError as exc:
        sys.stderr.write(f"limit: {exc}\n")
        return EXIT_LIMIT
    except InvariantError as exc:
        sys.stderr.write(f"invariant failure: {exc}\n")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
