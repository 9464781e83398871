"""Invariant checks over the generated corpus and the golden result files.

Every check compares a solver against the brute-force oracle or against a
structural property of its own output.  A report lists each failure with
module, instance id, seed and the violated property.
"""

from __future__ import annotations

import difflib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import algorithms, approx, birkhoff, fpt, oracle, special, two_agents
from .core import EgalMatchError, Instance, evaluate, make_square, pad_goods
from .corpus import KINDS, CorpusItem, corpus, random_allocation
from .formats import dumps, instance_from_json, result_to_json


@dataclass(frozen=True)
class Failure:
    module: str
    item: str
    seed: int | None
    property: str
    detail: str = ""

    def line(self) -> str:
        seed = "-" if self.seed is None else str(self.seed)
        text = f"FAIL module={self.module} instance={self.item} seed={seed} property={self.property}"
        return text + (f"\n  {self.detail}" if self.detail else "")


@dataclass
class Report:
    checked: dict[tuple[str, str], int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = []
        for (module, prop), count in sorted(self.checked.items()):
            bad = sum(1 for f in self.failures if (f.module, f.property) == (module, prop))
            lines.append(f"{module:<16} {prop:<36} {count:>5} checked {bad:>3} failed")
        lines.extend(f.line() for f in sorted(self.failures, key=lambda f: (f.item, f.module, f.property)))
        lines.append("verify: " + ("ok" if self.ok else f"{len(self.failures)} failure(s)"))
        return "\n".join(lines) + "\n"


class _Checker:
    def __init__(self, report: Report, item: CorpusItem):
        self.report, self.item = report, item

    def __call__(self, module: str, prop: str, fn) -> None:
        key = (module, prop)
        self.report.checked[key] = self.report.checked.get(key, 0) + 1
        try:
            detail = fn()
        except EgalMatchError as exc:
            detail = f"{type(exc).__name__}: {exc}"
        if detail:
            self.report.failures.append(Failure(module, self.item.id, self.item.seed, prop, str(detail)))


def _bottlenecks(inst: Instance, seq) -> list[Fraction]:
    return list(evaluate(pad_goods(inst), seq).bottlenecks)


def _expect(cond: bool, detail: str) -> str:
    return "" if cond else detail


def _check_general(check: _Checker, inst: Instance, opts, limits) -> None:
    m = make_square(inst).m
    slack = m * inst.max_value()

    def approx_final():
        run = approx.approx_optimal_run(inst)
        got = _bottlenecks(inst, run.sequence)[-1]
        lp_bound = inst.T * run.lp.b - slack
        return _expect(got >= opts[-1] - slack and got >= lp_bound,
                       f"b^T={got}, OPT(T)={opts[-1]}, T*b*={inst.T * run.lp.b}, slack={slack}")

    runs: dict = {}

    def anytime_run():
        if "run" not in runs:
            runs["run"] = approx.approx_anytime_run(inst)
        return runs["run"]

    def approx_anytime():
        got = _bottlenecks(inst, anytime_run().sequence)
        bad = [t + 1 for t in range(inst.T) if got[t] < opts[t] - 5 * slack]
        return _expect(not bad, f"prefix bound broken at rounds {bad}")

    def sparsity():
        nz = anytime_run().lp.B.nonzeros()
        return _expect(nz <= 5 * m, f"{nz} nonzeros > 5m = {5 * m}")

    def decomposition():
        run = anytime_run()
        dec = run.decomposition
        same = dec.reconstruct(m) == [list(r) for r in run.lp.B.entries]
        return _expect(same and len(dec.terms) <= m * m - m + 1,
                       f"{len(dec.terms)} terms, reconstruction {'ok' if same else 'differs'}")

    def fpt_exact():
        got = _bottlenecks(inst, fpt.fpt_optimal(inst))[-1]
        return _expect(got == opts[-1], f"fpt {got} != OPT {opts[-1]}")

    def allocation_values():
        rng = random.Random(repr(inst))
        work = pad_goods(inst)
        alloc = random_allocation(rng, work.n, work.m, inst.T)
        seq = birkhoff.allocation_to_sequence(alloc, inst.T)
        final = evaluate(work, seq).final_values()
        low = [i for i in range(work.n) if final[i] < alloc.value(work, i)]
        distinct = len(set(seq))
        return _expect(not low and distinct <= work.m ** 2 - work.m + 1,
                       f"agents below allocation value {low}, {distinct} distinct matchings")

    check("approx", "final >= OPT - m*maxu", approx_final)
    check("approx", "prefix >= OPT(t) - 5m*maxu", approx_anytime)
    check("egalitarian_lp", "vertex nonzeros <= 5m", sparsity)
    check("birkhoff", "decomposition reconstructs B", decomposition)
    check("birkhoff", "allocation values preserved", allocation_values)
    check("fpt", "fpt = OPT(T)", fpt_exact)
    if inst.n <= 3:
        check("fpt", "priority profiles = Pareto profiles", lambda: _expect(
            fpt.pareto_optimal_profiles(inst) == {p for _, p in oracle.pareto_enumerate(pad_goods(inst), limits)},
            "profile sets differ"))


def _check_binary(check: _Checker, inst: Instance, opts, limits) -> None:
    def exact():
        got = _bottlenecks(inst, special.binary_optimal(inst))[-1]
        return _expect(got == opts[-1], f"binary {got} != OPT {opts[-1]}")

    def dominators():
        work = pad_goods(inst)
        goods = special.maximum_matching_goods(work)
        for mt in oracle.all_matchings(work, limits):
            d = special.dominator_on_goods(work, mt, goods)
            p, q = work.profile(d), work.profile(mt)
            if any(a < b for a, b in zip(p, q)):
                return f"{d} does not dominate {mt}"
            if any(d[i] not in goods for i in range(work.n) if work.values[i][mt[i]] == 1):
                return f"{d} leaves the maximum-matching goods"
        return ""

    check("special", "binary = OPT(T)", exact)
    check("special", "weak dominator on G'", dominators)


def _check_two_goods(check: _Checker, inst: Instance, opts, limits) -> None:
    def exact():
        got = _bottlenecks(inst, special.two_goods_optimal(inst))[-1]
        return _expect(got == opts[-1], f"two-goods {got} != OPT {opts[-1]}")

    check("special", "two-goods = OPT(T)", exact)


def _check_identical(check: _Checker, inst: Instance, opts, limits) -> None:
    delta = special.gap(inst)

    def greedy():
        got = _bottlenecks(inst, special.identical_greedy(inst))
        bad = [t + 1 for t in range(inst.T) if got[t] < opts[t] - delta]
        return _expect(not bad, f"greedy below OPT(t) - gap at rounds {bad}")

    check("special", "greedy >= OPT(t) - gap", greedy)
    if inst.T % inst.n == 0:
        def exact():
            work = pad_goods(inst)
            got = _bottlenecks(inst, special.identical_exact(inst))[-1]
            top = sum(work.values[0][j] for j in special.top_goods(work))
            want = inst.T // inst.n * top
            return _expect(got == want == opts[-1], f"exact {got}, k*top {want}, OPT {opts[-1]}")

        check("special", "identical exact = OPT(T)", exact)


def _check_two_agent(check: _Checker, inst: Instance, opts, limits) -> None:
    def anytime():
        got = _bottlenecks(inst, two_agents.anytime_two_agents(inst))
        return _expect(got == opts, f"trajectory {got} != OPT {opts}")

    check("two_agents", "b^t = OPT(t) for all t", anytime)


_CHECKS = {
    "general": _check_general,
    "binary": _check_binary,
    "two-goods": _check_two_goods,
    "identical": _check_identical,
    "two-agent": _check_two_agent,
}


def check_item(report: Report, item: CorpusItem, limits: oracle.Limits = oracle.DEFAULT_LIMITS) -> None:
    check = _Checker(report, item)
    try:
        opts = oracle.opt_values(pad_goods(item.instance), None, limits)
    except EgalMatchError as exc:
        msg = f"{type(exc).__name__}: {exc}"
        check("oracle", "within budget", lambda: msg)
        return
    _CHECKS[item.kind](check, item.instance, opts, limits)


def golden_paths(directory: str | Path | None = None) -> list[Path]:
    if directory is None:
        root = resources.files("egalmatch") / "golden"
        return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))
    return sorted(Path(directory).glob("*.json"))


def check_golden(report: Report, path: Path, opts: algorithms.Options = algorithms.Options()) -> None:
    key = ("golden", "result document unchanged")
    report.checked[key] = report.checked.get(key, 0) + 1
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        inst = instance_from_json(doc["instance"])
        expected = dumps(doc["result"])
        actual = dumps(result_to_json(inst, algorithms.solve(inst, doc["result"]["algorithm"], opts)))
    except (KeyError, TypeError, ValueError, EgalMatchError) as exc:
        report.failures.append(Failure("golden", path.name, None, key[1], f"unreadable: {exc}"))
        return
    if expected != actual:
        diff = "".join(difflib.unified_diff(
            expected.splitlines(True), actual.splitlines(True), f"{path.name} (golden)", f"{path.name} (computed)"
        ))
        report.failures.append(Failure("golden", path.name, None, key[1], diff.rstrip("\n").replace("\n", "\n  ")))


def run(seed: int = 0, count: int = 20, kinds=KINDS, golden_dir=None,
        limits: oracle.Limits = oracle.DEFAULT_LIMITS) -> Report:
    report = Report()
    for item in corpus(seed, count, kinds):
        check_item(report, item, limits)
    for path in golden_paths(golden_dir):
        check_golden(report, path, algorithms.Options(limits=limits))
    return report
