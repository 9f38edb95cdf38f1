"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` with
Bland's smallest-index pivot rule, so it terminates on degenerate problems
and returns the same basis for the same input every time.  Dual values are
read off the final basis, which makes complementary slackness hold by
construction.

Sign conventions for a solution ``sol`` of ``lp``:

* ``maximize``: a ``<=`` row has ``dual >= 0``, a ``>=`` row has ``dual <= 0``,
  and every reduced cost ``c_j - (A^T y)_j`` is ``<= 0``.
* ``minimize``: a ``>=`` row has ``dual >= 0``, a ``<=`` row has ``dual <= 0``,
  and every reduced cost is ``>= 0``.

With variable lower bounds ``l`` the dual objective is ``b.y + d.l`` where
``d`` are the reduced costs; it equals ``c.x`` at optimality.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ContractError, MalformedInputError, ResourceBoundError
from .rational import as_rational

MAXIMIZE = "maximize"
MINIMIZE = "minimize"
LE = "<="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)


def _dense_row(row, n: int, index: int) -> tuple[Fraction, ...]:
    if isinstance(row, Mapping):
        dense = [_ZERO] * n
        for col, value in row.items():
            if not isinstance(col, int) or not 0 <= col < n:
                raise MalformedInputError(
                    f"row {index}: column {col!r} out of range 0..{n - 1}", code="dimension"
                )
            dense[col] = as_rational(value)
        return tuple(dense)
    if len(row) != n:
        raise MalformedInputError(
            f"row {index} has {len(row)} entries, objective has {n}", code="dimension"
        )
    return tuple(as_rational(v) for v in row)


@dataclass(frozen=True)
class LinearProgram:
    """``direction  c.x  s.t.  A x (<= | >=) b,  x >= lower_bounds``.

    Rows of ``matrix`` may be dense sequences or sparse ``{column: value}``
    mappings; they are stored densely.  ``lower_bounds`` defaults to zero.
    """

    direction: str
    objective: Sequence
    matrix: Sequence
    rhs: Sequence
    senses: Sequence[str]
    lower_bounds: Sequence | None = None

    def __post_init__(self):
        if self.direction not in (MAXIMIZE, MINIMIZE):
            raise MalformedInputError(f"unknown direction {self.direction!r}", code="direction")
        objective = tuple(as_rational(v) for v in self.objective)
        n = len(objective)
        matrix = tuple(_dense_row(row, n, i) for i, row in enumerate(self.matrix))
        rhs = tuple(as_rational(v) for v in self.rhs)
        senses = tuple(self.senses)
        if len(rhs) != len(matrix) or len(senses) != len(matrix):
            raise MalformedInputError(
                f"{len(matrix)} rows but {len(rhs)} rhs entries and {len(senses)} senses",
                code="dimension",
            )
        for i, sense in enumerate(senses):
            if sense not in (LE, GE):
                raise MalformedInputError(f"row {i}: unknown sense {sense!r}", code="sense")
        for i, row in enumerate(matrix):
            if not any(row):
                raise MalformedInputError(f"row {i} has no nonzero entry", code="empty-row")
        if self.lower_bounds is None:
            lower = (_ZERO,) * n
        else:
            lower = tuple(as_rational(v) for v in self.lower_bounds)
            if len(lower) != n:
                raise MalformedInputError(
                    f"{len(lower)} lower bounds for {n} variables", code="dimension"
                )
        object.__setattr__(self, "objective", objective)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "lower_bounds", lower)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.matrix)

    def row_activity(self, x: Sequence[Fraction]) -> list[Fraction]:
        return [sum((a * xj for a, xj in zip(row, x) if a), _ZERO) for row in self.matrix]

    def with_bounds(
        self,
        lower: Mapping[int, Fraction] | None = None,
        upper: Mapping[int, Fraction] | None = None,
    ) -> LinearProgram:
        """Copy with raised lower bounds and extra ``x_j <= u`` rows."""
        lb = list(self.lower_bounds)
        for j, value in (lower or {}).items():
            lb[j] = max(lb[j], Fraction(value))
        matrix = list(self.matrix)
        rhs = list(self.rhs)
        senses = list(self.senses)
        for j, value in sorted((upper or {}).items()):
            matrix.append({j: 1})
            rhs.append(Fraction(value))
            senses.append(LE)
        return LinearProgram(self.direction, self.objective, matrix, rhs, senses, lb)


@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    basis: frozenset[int] = frozenset()
    reduced_costs: tuple[Fraction, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense simplex tableau ``T x = rhs`` with an explicit basis list."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], n_cols: int):
        self.rows = rows  # each row holds n_cols coefficients followed by the rhs
        self.basis = basis
        self.n_cols = n_cols

    def pivot(self, r: int, j: int) -> None:
        rows = self.rows
        prow = rows[r]
        p = prow[j]
        if p != 1:
            prow = [v / p if v else v for v in prow]
            rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(rows):
            if i == r:
                continue
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * prow[k]
        self.basis[r] = j

    def reduced_costs(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> dict[int, Fraction]:
        cb = [cost[b] for b in self.basis]
        out = {}
        for j in allowed:
            z = _ZERO
            for i, row in enumerate(self.rows):
                if cb[i] and row[j]:
                    z += cb[i] * row[j]
            out[j] = cost[j] - z
        return out

    def run(self, cost: Sequence[Fraction], allowed: Sequence[int]) -> bool:
        """Maximize ``cost . x`` with Bland's rule; False when unbounded."""
        while True:
            reduced = self.reduced_costs(cost, allowed)
            entering = next((j for j in allowed if reduced[j] > 0), None)
            if entering is None:
                return True
            leave = None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return False
            self.pivot(leave, entering)


def _solve_square(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact Gauss-Jordan solve of a nonsingular square system."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


def solve_lp(lp: LinearProgram) -> LPSolution:
    """Solve ``lp`` exactly, returning a basic optimal solution and its dual."""
    n, m = lp.n_vars, lp.n_rows
    sign = 1 if lp.direction == MAXIMIZE else -1
    cost = [sign * c for c in lp.objective]
    lb = lp.lower_bounds
    shifted = [
        b - sum((a * l for a, l in zip(row, lb) if a and l), _ZERO) for row, b in zip(lp.matrix, lp.rhs)
    ]
    slack_sign = [1 if s == LE else -1 for s in lp.senses]

    # Columns: structural 0..n-1, slacks n..n+m-1, artificials after that.
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    needs_artificial: list[int] = []
    for i in range(m):
        row = list(lp.matrix[i]) + [_ZERO] * m
        row[n + i] = Fraction(slack_sign[i])
        rhs = shifted[i]
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        rows.append(row + [rhs])
        if row[n + i] == 1:
            basis.append(n + i)
        else:
            basis.append(-1)
            needs_artificial.append(i)
    n_art = len(needs_artificial)
    n_cols = n + m + n_art
    for row in rows:
        rhs = row.pop()
        row.extend([_ZERO] * n_art)
        row.append(rhs)
    for k, i in enumerate(needs_artificial):
        rows[i][n + m + k] = Fraction(1)
        basis[i] = n + m + k

    tab = _Tableau(rows, basis, n_cols)
    real_cols = list(range(n + m))
    kept_rows = list(range(m))

    if n_art:
        phase1 = [_ZERO] * (n + m) + [Fraction(-1)] * n_art
        tab.run(phase1, list(range(n_cols)))
        if any(b >= n + m and tab.rows[i][-1] != 0 for i, b in enumerate(tab.basis)):
            return LPSolution(INFEASIBLE)
        # Drive zero-level artificials out; a row with no real entry is redundant.
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= n + m:
                j = next((j for j in real_cols if tab.rows[i][j]), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    del kept_rows[i]
                    continue
                tab.pivot(i, j)
            i += 1

    phase2 = cost + [_ZERO] * (m + n_art)
    if not tab.run(phase2, real_cols):
        return LPSolution(UNBOUNDED)

    shifted_x = [_ZERO] * (n + m)
    for i, b in enumerate(tab.basis):
        shifted_x[b] = tab.rows[i][-1]
    primal = tuple(shifted_x[j] + lb[j] for j in range(n))

    # Dual from the final basis: B^T y = c_B over the non-redundant rows.
    def column(j: int) -> list[Fraction]:
        if j < n:
            return [lp.matrix[i][j] for i in kept_rows]
        return [Fraction(slack_sign[i]) if i == j - n else _ZERO for i in kept_rows]

    y_kept = []
    if kept_rows:
        bt = [column(j) for j in tab.basis]
        y_kept = _solve_square(bt, [phase2[j] for j in tab.basis])
    dual = [_ZERO] * m
    for i, y in zip(kept_rows, y_kept):
        dual[i] = sign * y
    reduced = tuple(
        lp.objective[j] - sum((lp.matrix[i][j] * dual[i] for i in range(m) if dual[i]), _ZERO)
        for j in range(n)
    )
    value = sum((c * x for c, x in zip(lp.objective, primal)), _ZERO)
    return LPSolution(
        OPTIMAL,
        value=value,
        primal=primal,
        dual=tuple(dual),
        basis=frozenset(b for b in tab.basis if b < n + m),
        reduced_costs=reduced,
    )


@dataclass(frozen=True)
class Violation:
    kind: str  # primal-row | primal-bound | dual-sign | reduced-cost | objective | slackness-row | slackness-var
    index: int
    detail: str = ""


@dataclass(frozen=True)
class DualityReport:
    primal_feasible: bool
    dual_feasible: bool
    objectives_equal: bool
    complementary_slackness: bool
    primal_value: Fraction
    dual_value: Fraction
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def check_certificates(lp: LinearProgram, sol: LPSolution) -> DualityReport:
    """Audit primal/dual feasibility, value equality and complementary slackness exactly."""
    if sol.status != OPTIMAL:
        raise ContractError(f"certificates exist only for optimal solutions, status is {sol.status}")
    x, y = sol.primal, sol.dual
    if len(x) != lp.n_vars or len(y) != lp.n_rows:
        raise ContractError("solution dimensions do not match the LP")
    maximize = lp.direction == MAXIMIZE
    violations: list[Violation] = []
    activity = lp.row_activity(x)

    for i, (act, b, sense) in enumerate(zip(activity, lp.rhs, lp.senses)):
        if (sense == LE and act > b) or (sense == GE and act < b):
            violations.append(Violation("primal-row", i, f"{act} {sense} {b} fails"))
    for j, (xj, l) in enumerate(zip(x, lp.lower_bounds)):
        if xj < l:
            violations.append(Violation("primal-bound", j, f"x={xj} below {l}"))
    primal_ok = not violations

    for i, (yi, sense) in enumerate(zip(y, lp.senses)):
        nonneg = (sense == LE) == maximize
        if (nonneg and yi < 0) or (not nonneg and yi > 0):
            violations.append(Violation("dual-sign", i, f"y={yi} has wrong sign for {sense} row"))
    reduced = [
        c - sum((lp.matrix[i][j] * y[i] for i in range(lp.n_rows) if y[i]), _ZERO)
        for j, c in enumerate(lp.objective)
    ]
    for j, d in enumerate(reduced):
        if (maximize and d > 0) or (not maximize and d < 0):
            violations.append(Violation("reduced-cost", j, f"reduced cost {d}"))
    dual_ok = not any(v.kind in ("dual-sign", "reduced-cost") for v in violations)

    primal_value = sum((c * xj for c, xj in zip(lp.objective, x)), _ZERO)
    dual_value = sum((b * yi for b, yi in zip(lp.rhs, y)), _ZERO) + sum(
        (d * l for d, l in zip(reduced, lp.lower_bounds)), _ZERO
    )
    equal = primal_value == dual_value
    if not equal:
        violations.append(Violation("objective", -1, f"primal {primal_value} != dual {dual_value}"))

    slack_ok = True
    for i, (yi, act, b) in enumerate(zip(y, activity, lp.rhs)):
        if yi and act != b:
            slack_ok = False
            violations.append(Violation("slackness-row", i, f"y={yi} on slack row"))
    for j, (d, xj, l) in enumerate(zip(reduced, x, lp.lower_bounds)):
        if d and xj != l:
            slack_ok = False
            violations.append(Violation("slackness-var", j, f"reduced cost {d} with x above bound"))

    return DualityReport(
        primal_feasible=primal_ok,
        dual_feasible=dual_ok,
        objectives_equal=equal,
        complementary_slackness=slack_ok,
        primal_value=primal_value,
        dual_value=dual_value,
        violations=tuple(violations),
    )


@dataclass(frozen=True)
class IntegralDualWitness:
    found: bool
    assignment: tuple[int, ...] = ()
    objective_value: Fraction | None = None
    nodes_explored: int = 0
    flags: tuple[str, ...] = field(default=(), compare=False)


def _check_search_form(lp: LinearProgram) -> None:
    if lp.direction != MINIMIZE:
        raise ContractError("integral search expects a minimization LP (a dual)")
    if any(l < 0 or l.denominator != 1 for l in lp.lower_bounds):
        raise ContractError("integral search expects integral, nonnegative lower bounds")
    if any(c < 0 for c in lp.objective):
        raise ResourceBoundError(
            "negative objective coefficient: no finite bound on the integral search region"
        )


def search_caps(lp: LinearProgram, bound_value: Fraction) -> list[int]:
    """Upper bounds that some optimal integral point respects.

    A variable with positive cost cannot exceed ``bound_value / cost``.  A
    zero-cost variable is capped at the largest rhs it can help cover, which
    is only sound for covering systems (all rows ``>=`` with nonnegative
    coefficients); otherwise no finite region is derivable.
    """
    covering = all(s == GE for s in lp.senses) and all(a >= 0 for row in lp.matrix for a in row)
    caps = []
    for j, c in enumerate(lp.objective):
        if c > 0:
            caps.append(math.floor(bound_value / c))
            continue
        if not covering:
            raise ResourceBoundError(
                f"variable {j} has zero cost in a non-covering system: no finite search bound"
            )
        cap = 0
        for row, b in zip(lp.matrix, lp.rhs):
            if row[j] > 0 and b > 0:
                cap = max(cap, math.ceil(b / row[j]))
        caps.append(cap)
    return caps


def _branch_and_bound(lp: LinearProgram, target: Fraction | None, node_limit: int):
    """Depth-first LP branch and bound over integer points of a min LP.

    With ``target`` set, returns the first integral point whose objective is
    exactly ``target`` (nodes whose relaxation exceeds it are pruned).
    Otherwise returns the integral minimum.  Result is ``(point, value, nodes)``.
    """
    root = solve_lp(lp)
    if root.status == INFEASIBLE:
        return None, None, 1
    if root.status == UNBOUNDED:
        raise ResourceBoundError("relaxation is unbounded; integral search region is infinite")
    if target is not None and root.value != target:
        raise ContractError(f"target {target} is not the LP optimum {root.value}")

    if target is not None:
        bound_value = target
    else:
        # Rounding a covering solution up gives an integral upper bound.
        bound_value = sum((c * math.ceil(x) for c, x in zip(lp.objective, root.primal)), _ZERO)
    caps = search_caps(lp, bound_value)
    base_upper = {j: caps[j] for j, c in enumerate(lp.objective) if c == 0}

    best_point, best_value = None, None
    stack: list[tuple[dict, dict]] = [({}, dict(base_upper))]
    nodes = 0
    while stack:
        lower, upper = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise ResourceBoundError(f"integral search exceeded {node_limit} nodes")
        sol = root if nodes == 1 and not upper else solve_lp(lp.with_bounds(lower, upper))
        if sol.status != OPTIMAL:
            continue
        if target is not None and sol.value > target:
            continue
        if best_value is not None and sol.value >= best_value:
            continue
        frac = next((j for j, v in enumerate(sol.primal) if v.denominator != 1), None)
        if frac is None:
            point = tuple(int(v) for v in sol.primal)
            if target is not None:
                if sol.value == target:
                    return point, sol.value, nodes
                continue
            best_point, best_value = point, sol.value
            continue
        v = sol.primal[frac]
        hi = math.ceil(v)
        if hi <= caps[frac]:
            stack.append(({**lower, frac: hi}, upper))
        stack.append((lower, {**upper, frac: min(math.floor(v), upper.get(frac, caps[frac]))}))
    return best_point, best_value, nodes


def find_integral_dual(lp: LinearProgram, target, node_limit: int = 200_000) -> IntegralDualWitness:
    """Search for an integral feasible point of a min LP with objective exactly ``target``.

    ``lp`` is a dual program (minimize, variables bounded below by integers
    >= 0).  ``found=False`` means the exhaustive search proved no such point
    exists.
    """
    target = as_rational(target)
    _check_search_form(lp)
    if target.denominator != 1 and all(c.denominator == 1 for c in lp.objective):
        # Integral costs give integral objective values at integral points.
        root = solve_lp(lp)
        if root.status != OPTIMAL or root.value != target:
            raise ContractError(f"target {target} is not the LP optimum")
        return IntegralDualWitness(False, nodes_explored=1)
    point, value, nodes = _branch_and_bound(lp, target, node_limit)
    if point is None:
        return IntegralDualWitness(False, nodes_explored=nodes)
    return IntegralDualWitness(True, point, value, nodes)


def integral_optimum(lp: LinearProgram, node_limit: int = 200_000) -> IntegralDualWitness:
    """Minimum objective over integral feasible points of a covering min LP."""
    _check_search_form(lp)
    if not (all(s == GE for s in lp.senses) and all(a >= 0 for row in lp.matrix for a in row)):
        raise ContractError("integral_optimum needs a covering system (>= rows, nonnegative A)")
    point, value, nodes = _branch_and_bound(lp, None, node_limit)
    if point is None:
        return IntegralDualWitness(False, nodes_explored=nodes)
    return IntegralDualWitness(True, point, value, nodes)
