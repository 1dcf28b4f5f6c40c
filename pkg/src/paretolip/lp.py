"""Exact rational linear programming with certified outcomes.

A dense two-phase tableau simplex over exact rationals, pivoting by Bland's
rule (lowest index in, lowest basis index out on ratio ties), so every run
terminates and identical inputs produce identical outputs.  All three
outcomes are certified before being returned:

* optimal    - primal point, value and dual multipliers satisfying
               stationarity, complementary slackness and strong duality
               exactly;
* infeasible - a Farkas vector over the rows;
* unbounded  - a feasible point plus a feasible ray that improves the
               objective.

The public entry points speak three dialects: ``solve`` for the package's
native ``<a_t, x> <= b_t`` systems with free variables, ``solve_lp`` for
mixed inequality/equality systems over free variables, and ``solve_nonneg``
for equality systems over nonnegative variables (used for dual faces and
consistency tests).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalError, NotSolvable
from .rational import Q, Q0, Q1, Rat, Vec, dot, is_zero, zeros

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    """Certified result of one linear program."""

    status: str
    point: Vec | None = None
    value: Rat | None = None
    dual: Vec | None = None      # multipliers for '<=' rows, >= 0
    eq_dual: Vec | None = None   # multipliers for '=' rows, free sign
    ray: Vec | None = None       # improving feasible ray when unbounded
    farkas: Vec | None = None    # row multipliers certifying infeasibility

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


# ---------------------------------------------------------------------------
# core: min cost.y  s.t.  rows.y = rhs, y >= 0
# ---------------------------------------------------------------------------


def _pivot(T, z, basis, r, e):
    row = T[r]
    p = row[e]
    if p != 1:
        T[r] = row = [x / p for x in row]
    for i in range(len(T)):
        if i != r and T[i][e]:
            f = T[i][e]
            ti = T[i]
            T[i] = [a - f * b if b else a for a, b in zip(ti, row)]
    if z[e]:
        f = z[e]
        z[:] = [a - f * b if b else a for a, b in zip(z, row)]
    basis[r] = e


def _bland_loop(T, z, basis, allowed, total):
    """Run Bland pivots until optimal (None) or unbounded (entering col)."""
    while True:
        e = None
        for j in allowed:
            if z[j] < 0:
                e = j
                break
        if e is None:
            return None
        r = None
        best = None
        for i in range(len(T)):
            tie = T[i][e]
            if tie > 0:
                ratio = T[i][total] / tie
                if best is None or ratio < best or (ratio == best and basis[i] < basis[r]):
                    best = ratio
                    r = i
        if r is None:
            return e
        _pivot(T, z, basis, r, e)


def simplex_standard(ncols: int, eq_rows, eq_rhs, cost) -> LpOutcome:
    """Solve min cost.y s.t. eq_rows.y = eq_rhs, y >= 0 exactly."""
    m = len(eq_rows)
    total = ncols + m
    T = []
    signs = []
    for row, f in zip(eq_rows, eq_rhs):
        f = Q(f)
        if f < 0:
            T.append([-Q(x) for x in row] + [Q0] * m + [-f])
            signs.append(-1)
        else:
            T.append([Q(x) for x in row] + [Q0] * m + [f])
            signs.append(1)
    for i in range(m):
        T[i][ncols + i] = Q1
    basis = list(range(ncols, total))

    # phase 1: minimize the artificial sum
    z = [Q0] * (total + 1)
    for ti in T:
        for j in range(total + 1):
            if ti[j]:
                z[j] -= ti[j]
    for k in range(m):
        z[ncols + k] += Q1
    verdict = _bland_loop(T, z, basis, range(total), total)
    if verdict is not None:  # pragma: no cover - phase 1 is always bounded
        raise InternalError("phase-1 objective unbounded")
    if z[total] < 0:  # positive infeasibility measure
        pi = tuple(signs[k] * (Q1 - z[ncols + k]) for k in range(m))
        return LpOutcome(INFEASIBLE, farkas=pi)

    # drive artificials out of the basis; rows that cannot pivot are
    # redundant and stay inert (identically zero on real columns)
    for i in range(m):
        if basis[i] >= ncols:
            e = next((j for j in range(ncols) if T[i][j]), None)
            if e is not None:
                _pivot(T, z, basis, i, e)

    # phase 2
    z = [Q(c) for c in cost] + [Q0] * (m + 1)
    for i in range(m):
        bi = basis[i]
        if bi < ncols and cost[bi]:
            f = Q(cost[bi])
            z = [a - f * b if b else a for a, b in zip(z, T[i])]
    verdict = _bland_loop(T, z, basis, range(ncols), total)
    y = list(zeros(ncols))
    for i in range(m):
        if basis[i] < ncols:
            y[basis[i]] = T[i][total]
    if verdict is not None:
        e = verdict
        d = list(zeros(ncols))
        d[e] = Q1
        for i in range(m):
            if basis[i] < ncols and T[i][e]:
                d[basis[i]] = -T[i][e]
        return LpOutcome(UNBOUNDED, point=tuple(y), ray=tuple(d))
    duals = tuple(signs[k] * (-z[ncols + k]) for k in range(m))
    return LpOutcome(OPTIMAL, point=tuple(y), value=-z[total], eq_dual=duals)


# ---------------------------------------------------------------------------
# free-variable wrappers
# ---------------------------------------------------------------------------


def solve_lp(objective, ineqs, eqs=(), n: int | None = None) -> LpOutcome:
    """min objective.x s.t. g.x <= h for (g, h) in ineqs, e.x = f in eqs,
    with x free.  Free variables are split internally."""
    ineqs = [(tuple(g), Q(h)) for g, h in ineqs]
    eqs = [(tuple(e), Q(f)) for e, f in eqs]
    if n is None:
        if objective is not None:
            n = len(objective)
        elif ineqs:
            n = len(ineqs[0][0])
        elif eqs:
            n = len(eqs[0][0])
        else:
            raise ValueError("cannot infer dimension")
    objective = tuple(Q(c) for c in objective) if objective is not None else zeros(n)
    k = len(ineqs)
    ncols = 2 * n + k
    rows = []
    rhs = []
    for i, (g, h) in enumerate(ineqs):
        slack = [Q0] * k
        slack[i] = Q1
        rows.append(list(g) + [-x for x in g] + slack)
        rhs.append(h)
    for e, f in eqs:
        rows.append(list(e) + [-x for x in e] + [Q0] * k)
        rhs.append(f)
    cost = list(objective) + [-c for c in objective] + [Q0] * k
    res = simplex_standard(ncols, rows, rhs, cost)

    if res.status == INFEASIBLE:
        nu = tuple(-p for p in res.farkas)
        _certify_farkas(nu, ineqs, eqs, n)
        return LpOutcome(INFEASIBLE, farkas=nu)

    def tox(y):
        return tuple(y[j] - y[n + j] for j in range(n))

    if res.status == UNBOUNDED:
        ray = tox(res.ray)
        point = tox(res.point)
        _certify_ray(objective, ray, point, ineqs, eqs)
        return LpOutcome(UNBOUNDED, point=point, ray=ray)

    x = tox(res.point)
    lam = tuple(-res.eq_dual[i] for i in range(k))
    mu = tuple(-res.eq_dual[k + j] for j in range(len(eqs)))
    _certify_optimal(objective, x, res.value, lam, mu, ineqs, eqs)
    return LpOutcome(OPTIMAL, point=x, value=res.value, dual=lam, eq_dual=mu)


def solve_nonneg(objective, eq_rows, eq_rhs) -> LpOutcome:
    """min objective.y s.t. eq_rows.y = eq_rhs, y >= 0 (certified)."""
    res = simplex_standard(len(objective), eq_rows, eq_rhs, objective)
    if res.status == OPTIMAL:
        y = res.point
        if any(v < 0 for v in y):
            raise InternalError("negative basic value in nonneg solve")
        for row, f in zip(eq_rows, eq_rhs):
            if dot(row, y) != Q(f):
                raise InternalError("equality violated at nonneg optimum")
    return res


def _certify_optimal(c, x, value, lam, mu, ineqs, eqs):
    if dot(c, x) != value:
        raise InternalError("objective value mismatch")
    grad = list(c)
    paid = Q0
    for li, (g, h) in zip(lam, ineqs):
        s = dot(g, x) - h
        if s > 0:
            raise InternalError("primal infeasibility at optimum")
        if li < 0:
            raise InternalError("negative inequality multiplier")
        if li and s:
            raise InternalError("complementary slackness violated")
        if li:
            for j, gj in enumerate(g):
                grad[j] += li * gj
            paid += li * h
    for mj, (e, f) in zip(mu, eqs):
        if dot(e, x) != f:
            raise InternalError("equality violated at optimum")
        if mj:
            for j, ej in enumerate(e):
                grad[j] += mj * ej
            paid += mj * f
    if not is_zero(grad):
        raise InternalError("dual stationarity violated")
    if value + paid != 0:
        raise InternalError("strong duality violated")


def _certify_ray(c, ray, point, ineqs, eqs):
    if dot(c, ray) >= 0:
        raise InternalError("ray does not improve objective")
    for g, h in ineqs:
        if dot(g, ray) > 0 or dot(g, point) > h:
            raise InternalError("ray or point infeasible")
    for e, f in eqs:
        if dot(e, ray) != 0 or dot(e, point) != f:
            raise InternalError("ray or point violates equality")


def _certify_farkas(nu, ineqs, eqs, n):
    combo = list(zeros(n))
    total = Q0
    for v, (g, h) in zip(nu, ineqs):
        if v < 0:
            raise InternalError("negative Farkas multiplier on inequality")
        if v:
            for j, gj in enumerate(g):
                combo[j] += v * gj
            total += v * h
    for v, (e, f) in zip(nu[len(ineqs):], eqs):
        if v:
            for j, ej in enumerate(e):
                combo[j] += v * ej
            total += v * f
    if not is_zero(combo) or total >= 0:
        raise InternalError("invalid Farkas certificate")


# ---------------------------------------------------------------------------
# the package's native dialect: <a_t, x> <= b_t with free x
# ---------------------------------------------------------------------------


def solve(rows, b, c) -> LpOutcome:
    """min <c, x> over the system <a_t, x> <= b_t; all outcomes certified."""
    return solve_lp(c, list(zip(rows, b)))


def feasible(rows, b) -> bool:
    n = len(rows[0]) if rows else 0
    return solve_lp(zeros(n), list(zip(rows, b))).is_optimal


def dual_consistent(rows, c) -> bool:
    """True iff -c lies in the conic hull of the constraint rows, i.e.
    some lambda >= 0 satisfies  sum_t lambda_t a_t = -c  (feasibility LP)."""
    n = len(c)
    m = len(rows)
    eq_rows = [[rows[t][j] for t in range(m)] for j in range(n)]
    eq_rhs = [-x for x in c]
    return solve_nonneg(zeros(m), eq_rows, eq_rhs).is_optimal


@dataclass(frozen=True)
class DualFace:
    """H-representation of the optimal dual multipliers of one LP:
    { lambda >= 0 | sum_t lambda_t a_t = -c, <b, lambda> = -value }."""

    rows: tuple
    b: Vec
    c: Vec
    value: Rat

    @property
    def m(self) -> int:
        return len(self.rows)

    def eq_system(self):
        n = len(self.c)
        eq_rows = [[self.rows[t][j] for t in range(self.m)] for j in range(n)]
        eq_rows.append(list(self.b))
        eq_rhs = [-x for x in self.c] + [-self.value]
        return eq_rows, eq_rhs

    def contains(self, lam: Vec) -> bool:
        if len(lam) != self.m or any(v < 0 for v in lam):
            return False
        eq_rows, eq_rhs = self.eq_system()
        return all(dot(row, lam) == r for row, r in zip(eq_rows, eq_rhs))

    def vrep(self):
        """(vertices, rays) of the face, via double description."""
        from .polyhedra import vertex_enumeration

        eq_rows, eq_rhs = self.eq_system()
        ineqs = []
        for t in range(self.m):
            g = list(zeros(self.m))
            g[t] = Q(-1)
            ineqs.append((tuple(g), Q0))
        vertices, rays, lineality = vertex_enumeration(self.m, ineqs,
                                                       list(zip(eq_rows, eq_rhs)))
        if lineality:
            raise InternalError("dual face cannot have lineality")
        return vertices, rays

    def max_l1(self) -> Rat | None:
        """max sum_t lambda_t over the face (= max l1-norm since lambda >= 0);
        None when the face is unbounded in that direction."""
        eq_rows, eq_rhs = self.eq_system()
        res = solve_nonneg([Q(-1)] * self.m, eq_rows, eq_rhs)
        if res.status == UNBOUNDED:
            return None
        if res.status == INFEASIBLE:
            raise InternalError("dual face empty for a solvable program")
        return -res.value

    def argmax_l1(self) -> Vec | None:
        eq_rows, eq_rhs = self.eq_system()
        res = solve_nonneg([Q(-1)] * self.m, eq_rows, eq_rhs)
        return res.point if res.is_optimal else None


def dual_face(rows, b, c) -> DualFace:
    """The full polyhedron of optimal dual multipliers at parameter b.

    Requires the primal to be solvable; raises ``NotSolvable`` otherwise.
    """
    outcome = solve(rows, b, c)
    if not outcome.is_optimal:
        raise NotSolvable(f"primal program is {outcome.status}")
    return DualFace(tuple(tuple(a) for a in rows), tuple(b), tuple(c),
                    outcome.value)


# ---------------------------------------------------------------------------
# dom S membership for multiobjective instances
# ---------------------------------------------------------------------------


_positive_weight_cache: dict = {}


def positive_weight_exists(rows, objectives) -> bool:
    """True iff some strictly positive weighting of the objectives is
    bounded below on every nonempty feasible set.

    The uniform weighting is tested first; the general test asks for
    lambda >= 1 (componentwise) and mu >= 0 with
    sum_i lambda_i c_i + sum_t mu_t a_t = 0.  The answer depends only on
    the rows and objectives, so it is memoized.
    """
    key = (tuple(tuple(a) for a in rows), tuple(tuple(c) for c in objectives))
    hit = _positive_weight_cache.get(key)
    if hit is not None:
        return hit
    n = len(objectives[0])
    q = len(objectives)
    m = len(rows)
    uniform = tuple(sum((c[j] for c in objectives), Q0) for j in range(n))
    if dual_consistent(rows, uniform):
        result = True
    else:
        eq_rows = [[objectives[i][j] for i in range(q)] +
                   [rows[t][j] for t in range(m)] for j in range(n)]
        eq_rhs = [-x for x in uniform]
        result = solve_nonneg(zeros(q + m), eq_rows, eq_rhs).is_optimal
    _positive_weight_cache[key] = result
    return result


def positive_weight_certificate(rows, objectives):
    """A strictly positive weighting lambda >= 1 whose combined objective is
    dual consistent, or None when none exists."""
    n = len(objectives[0])
    q = len(objectives)
    m = len(rows)
    uniform = tuple(sum((c[j] for c in objectives), Q0) for j in range(n))
    eq_rows = [[objectives[i][j] for i in range(q)] + [rows[t][j] for t in range(m)]
               for j in range(n)]
    eq_rhs = [-x for x in uniform]
    res = solve_nonneg(zeros(q + m), eq_rows, eq_rhs)
    if not res.is_optimal:
        return None
    return tuple(res.point[i] + Q1 for i in range(q))


def in_dom_s(problem, b) -> bool:
    """Nondominated solutions exist at b iff the feasible set is nonempty
    and some strictly positive weighting is dual consistent."""
    if not feasible(problem.rows, b):
        return False
    return positive_weight_exists(problem.rows, problem.objectives)
