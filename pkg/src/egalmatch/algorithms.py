"""Registry of solvers by name, with the guarantee each one carries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import approx, fpt, oracle, special, two_agents
from .core import Instance, InvariantError, Matching, SolveResult, evaluate, make_square, pad_goods

EXACT_FINAL = "exact-final"
EXACT_ANYTIME = "exact-anytime"
ADDITIVE_FINAL = "additive-final"
ADDITIVE_ANYTIME = "additive-anytime"


@dataclass(frozen=True)
class Options:
    fpt_limit: int = fpt.DEFAULT_FPT_LIMIT
    limits: oracle.Limits = oracle.DEFAULT_LIMITS


@dataclass(frozen=True)
class Algorithm:
    name: str
    run: Callable[[Instance, Options], list[Matching]]
    guarantee: str
    slack: Callable[[Instance], Fraction]

    @property
    def anytime(self) -> bool:
        return self.guarantee in (EXACT_ANYTIME, ADDITIVE_ANYTIME)


def _zero(inst: Instance) -> Fraction:
    return Fraction(0)


def _m_maxu(inst: Instance) -> Fraction:
    return make_square(inst).m * inst.max_value()


def _oracle_run(inst: Instance, opts: Options) -> list[Matching]:
    return oracle.brute_opt_witness(pad_goods(inst), None, opts.limits)[1]


ALGORITHMS: dict[str, Algorithm] = {
    a.name: a
    for a in [
        Algorithm("approx", lambda i, o: approx.approx_optimal(i), ADDITIVE_FINAL, _m_maxu),
        Algorithm("anytime-approx", lambda i, o: approx.approx_anytime(i), ADDITIVE_ANYTIME,
                  lambda i: 5 * _m_maxu(i)),
        Algorithm("fpt", lambda i, o: fpt.fpt_optimal(i, o.fpt_limit), EXACT_FINAL, _zero),
        Algorithm("binary", lambda i, o: special.binary_optimal(i), EXACT_FINAL, _zero),
        Algorithm("two-goods", lambda i, o: special.two_goods_optimal(i), EXACT_FINAL, _zero),
        Algorithm("identical-exact", lambda i, o: special.identical_exact(i), EXACT_FINAL, _zero),
        Algorithm("identical-greedy", lambda i, o: special.identical_greedy(i), ADDITIVE_ANYTIME, special.gap),
        Algorithm("two-agent-anytime", lambda i, o: two_agents.anytime_two_agents(i), EXACT_ANYTIME, _zero),
        Algorithm("oracle", _oracle_run, EXACT_FINAL, _zero),
    ]
}


def get(name: str) -> Algorithm:
    try:
        return ALGORITHMS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}") from None


def solve(inst: Instance, name: str, opts: Options = Options()) -> SolveResult:
    """Run ``name`` on ``inst`` and re-check the sequence it returns.

    Good indices at or beyond ``inst.m`` denote padding goods worth nothing.
    """
    alg = get(name)
    seq = [tuple(mt) for mt in alg.run(inst, opts)]
    if len(seq) != inst.T:
        raise InvariantError(f"{name} returned {len(seq)} matchings for {inst.T} rounds")
    evaluate(pad_goods(inst), seq)  # validates every matching
    return SolveResult(name, tuple(seq), alg.guarantee, alg.slack(inst))
