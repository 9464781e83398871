"""Dense two-phase primal simplex over exact rationals.

Solves ``max c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0`` with
Bland's rule, so it always terminates at a basic (vertex) optimum.  The
optimal basis also yields dual values, which :func:`check_certificate`
uses to confirm optimality by strong duality.

Only meant for the small programs this package builds; there is no
sparsity handling or numerical shortcut of any kind.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import EgalMatchError, InvariantError

ZERO = Fraction(0)
ONE = Fraction(1)


class LpInfeasible(EgalMatchError):
    pass


class LpUnbounded(EgalMatchError):
    pass


@dataclass(frozen=True)
class LinearProgram:
    c: tuple[Fraction, ...]
    A_ub: tuple[tuple[Fraction, ...], ...] = ()
    b_ub: tuple[Fraction, ...] = ()
    A_eq: tuple[tuple[Fraction, ...], ...] = ()
    b_eq: tuple[Fraction, ...] = ()

    @classmethod
    def build(cls, c, A_ub=(), b_ub=(), A_eq=(), b_eq=()) -> "LinearProgram":
        conv = lambda rows: tuple(tuple(Fraction(v) for v in r) for r in rows)  # noqa: E731
        return cls(
            tuple(Fraction(v) for v in c),
            conv(A_ub),
            tuple(Fraction(v) for v in b_ub),
            conv(A_eq),
            tuple(Fraction(v) for v in b_eq),
        )

    @property
    def num_vars(self) -> int:
        return len(self.c)


@dataclass(frozen=True)
class LpResult:
    x: tuple[Fraction, ...]
    objective: Fraction
    basis: tuple[int, ...]  # standard-form column indices (structural, then slacks)
    dual_ub: tuple[Fraction, ...]
    dual_eq: tuple[Fraction, ...]
    pivots: int


def _pivot(rows: list[list[Fraction]], obj: list[Fraction], r: int, col: int) -> None:
    prow = rows[r]
    piv = prow[col]
    if piv != 1:
        inv = ONE / piv
        for k, v in enumerate(prow):
            if v:
                prow[k] = v * inv
    nz = [k for k, v in enumerate(prow) if v]
    for other in rows:
        if other is prow:
            continue
        f = other[col]
        if f:
            for k in nz:
                other[k] -= f * prow[k]
    f = obj[col]
    if f:
        for k in nz:
            obj[k] -= f * prow[k]


def _run(rows, obj, basis, allowed: int) -> int:
    """Bland-rule iterations maximising; ``obj`` holds reduced costs, last entry = -value."""
    pivots = 0
    width = len(obj) - 1
    while True:
        col = next((j for j in range(min(allowed, width)) if obj[j] > 0), None)
        if col is None:
            return pivots
        best = None
        for r, row in enumerate(rows):
            a = row[col]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:
            raise LpUnbounded("objective is unbounded")
        r = best[1]
        _pivot(rows, obj, r, col)
        basis[r] = col
        pivots += 1


def solve_linear(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly by Gauss-Jordan elimination."""
    size = len(M)
    aug = [list(M[i]) + [rhs[i]] for i in range(size)]
    for col in range(size):
        piv = next((r for r in range(col, size) if aug[r][col] != 0), None)
        if piv is None:
            raise InvariantError("basis matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][-1] for r in range(size)]


def solve(lp: LinearProgram) -> LpResult:
    """Two-phase simplex; raises :class:`LpInfeasible` / :class:`LpUnbounded`."""
    nv = lp.num_vars
    n_ub, n_eq = len(lp.A_ub), len(lp.A_eq)
    n_struct = nv + n_ub  # structural + slack columns
    # Standard form rows, each with a sign so that the rhs is non-negative.
    std_rows: list[list[Fraction]] = []
    signs: list[int] = []
    for r in range(n_ub):
        row = list(lp.A_ub[r]) + [ZERO] * n_ub
        row[nv + r] = ONE
        std_rows.append(row + [lp.b_ub[r]])
    for r in range(n_eq):
        std_rows.append(list(lp.A_eq[r]) + [ZERO] * n_ub + [lp.b_eq[r]])
    for row in std_rows:
        if row[-1] < 0:
            row[:] = [-v for v in row]
            signs.append(-1)
        else:
            signs.append(1)
    n_rows = len(std_rows)
    original = [list(row) for row in std_rows]
    row_ids = list(range(n_rows))

    # Artificial columns only where the slack cannot start in the basis.
    basis: list[int] = []
    need_art = []
    for r in range(n_rows):
        if r < n_ub and signs[r] == 1:
            basis.append(nv + r)
        else:
            basis.append(-1)
            need_art.append(r)
    n_art = len(need_art)
    width = n_struct + n_art
    rows = []
    for r, row in enumerate(std_rows):
        body = row[:-1] + [ZERO] * n_art
        rows.append(body + [row[-1]])
    for k, r in enumerate(need_art):
        rows[r][n_struct + k] = ONE
        basis[r] = n_struct + k

    pivots = 0
    if n_art:
        # Phase I: maximise -sum(artificials).
        obj = [ZERO] * (width + 1)
        for r in need_art:
            for k in range(width + 1):
                obj[k] += rows[r][k]
        for k in range(n_art):
            obj[n_struct + k] = ZERO
        pivots += _run(rows, obj, basis, width)
        if obj[-1] != 0:
            raise LpInfeasible("no feasible point")
        # Drive zero-level artificials out of the basis or drop redundant rows.
        r = 0
        while r < len(rows):
            if basis[r] >= n_struct:
                col = next((j for j in range(n_struct) if rows[r][j] != 0), None)
                if col is None:
                    del rows[r], basis[r], original[r], signs[r], row_ids[r]
                    continue
                _pivot(rows, obj, r, col)
                basis[r] = col
                pivots += 1
            r += 1
        rows = [row[:n_struct] + [row[-1]] for row in rows]

    # Phase II.
    cost = list(lp.c) + [ZERO] * n_ub
    obj = cost + [ZERO]
    for r, b in enumerate(basis):
        f = obj[b]
        if f:
            for k in range(n_struct + 1):
                obj[k] -= f * rows[r][k]
    pivots += _run(rows, obj, basis, n_struct)

    x_full = [ZERO] * n_struct
    for r, b in enumerate(basis):
        x_full[b] = rows[r][-1]
    x = tuple(x_full[:nv])
    objective = sum((ci * xi for ci, xi in zip(lp.c, x)), ZERO)

    # Duals from B^T y = c_B over the kept (sign-adjusted) rows.
    size = len(basis)
    Bt = [[original[r][basis[k]] for r in range(size)] for k in range(size)]
    y = solve_linear(Bt, [cost[b] for b in basis]) if size else []
    dual_ub = [ZERO] * n_ub
    dual_eq = [ZERO] * n_eq
    for k, rid in enumerate(row_ids):
        val = y[k] * signs[k]
        if rid < n_ub:
            dual_ub[rid] = val
        else:
            dual_eq[rid - n_ub] = val
    return LpResult(x, objective, tuple(basis), tuple(dual_ub), tuple(dual_eq), pivots)


def check_certificate(lp: LinearProgram, res: LpResult) -> None:
    """Assert primal feasibility, dual feasibility and equal objectives, exactly."""
    x = res.x
    if any(v < 0 for v in x):
        raise InvariantError("primal solution has a negative variable")
    for r, row in enumerate(lp.A_ub):
        if sum((a * v for a, v in zip(row, x)), ZERO) > lp.b_ub[r]:
            raise InvariantError(f"inequality {r} violated")
    for r, row in enumerate(lp.A_eq):
        if sum((a * v for a, v in zip(row, x)), ZERO) != lp.b_eq[r]:
            raise InvariantError(f"equality {r} violated")
    if any(y < 0 for y in res.dual_ub):
        raise InvariantError("dual value of an inequality is negative")
    for j in range(lp.num_vars):
        lhs = sum((lp.A_ub[r][j] * res.dual_ub[r] for r in range(len(lp.A_ub))), ZERO)
        lhs += sum((lp.A_eq[r][j] * res.dual_eq[r] for r in range(len(lp.A_eq))), ZERO)
        if lhs < lp.c[j]:
            raise InvariantError(f"dual constraint for variable {j} violated")
    dual_obj = sum((b * y for b, y in zip(lp.b_ub, res.dual_ub)), ZERO)
    dual_obj += sum((b * y for b, y in zip(lp.b_eq, res.dual_eq)), ZERO)
    if dual_obj != res.objective:
        raise InvariantError(f"duality gap: primal {res.objective} vs dual {dual_obj}")
