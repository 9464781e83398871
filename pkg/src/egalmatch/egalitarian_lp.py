"""The fractional egalitarian program over bistochastic matrices.

    maximise b
    s.t.  sum_j B[i][j] * u_i(g_j) >= b      for every agent i
          rows and columns of B sum to 1,  B >= 0

Solved exactly with the rational simplex, which returns a vertex; a vertex
has few nonzero entries, which is what keeps Birkhoff decompositions of
the solution short.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .birkhoff import FractionalBistochastic
from .core import Instance, InvalidInstanceError, InvariantError
from .simplex import LinearProgram, LpResult, check_certificate, solve


@dataclass(frozen=True)
class LpSolution:
    b: Fraction
    B: FractionalBistochastic
    basis_size: int
    result: LpResult


def build_p1(inst: Instance) -> LinearProgram:
    """Variables are ``B[i][j]`` in agent-major order followed by ``b``."""
    m = inst.m
    nv = m * m + 1
    bcol = m * m
    c = [0] * nv
    c[bcol] = 1
    A_ub, b_ub = [], []
    for i in range(m):
        row = [Fraction(0)] * nv
        for j in range(m):
            row[i * m + j] = -inst.values[i][j]
        row[bcol] = Fraction(1)
        A_ub.append(row)
        b_ub.append(0)
    A_eq, b_eq = [], []
    for i in range(m):
        row = [0] * nv
        for j in range(m):
            row[i * m + j] = 1
        A_eq.append(row)
        b_eq.append(1)
    for j in range(m):
        row = [0] * nv
        for i in range(m):
            row[i * m + j] = 1
        A_eq.append(row)
        b_eq.append(1)
    return LinearProgram.build(c, A_ub, b_ub, A_eq, b_eq)


def solve_p1(inst: Instance) -> LpSolution:
    """Exact vertex optimum of the fractional program on a square instance.

    The solution is re-checked by substitution and by a dual certificate
    before it is returned.
    """
    if not inst.is_square():
        raise InvalidInstanceError(f"solve_p1 needs a square instance, got {inst.n}x{inst.m}")
    m = inst.m
    lp = build_p1(inst)
    res = solve(lp)
    check_certificate(lp, res)
    B = tuple(tuple(res.x[i * m + j] for j in range(m)) for i in range(m))
    sol = LpSolution(res.x[m * m], FractionalBistochastic(B), len(res.basis), res)
    for i in range(m):
        got = sum((B[i][j] * inst.values[i][j] for j in range(m)), Fraction(0))
        if got < sol.b:
            raise InvariantError(f"agent {i} receives {got} < b = {sol.b}")
    return sol
