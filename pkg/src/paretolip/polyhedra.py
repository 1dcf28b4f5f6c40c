"""Cone computations and symbolic single-direction eliminations.

The double description method converts halfspace descriptions of cones into
generator form (rays + lineality) exactly; homogenization extends it to
vertex/ray enumeration of polyhedra.  On top of that sit the two symbolic
elimination steps for parameter-affine systems:

* adding ``cone{u}`` keeps the rows with ``<a_t, u> <= 0`` and combines every
  such row with every row having ``<a_t, u> > 0``;
* adding ``span{u}`` keeps only rows orthogonal to u and combines the
  strictly negative rows with the strictly positive ones.

Both produce right-hand sides that stay affine in the parameter, so the
output is again a valid parametric system.  Folding these steps over the
generators of the objective polar cone yields the epigraphical feasible-set
system; redundancy is pruned after every step because the row count grows
multiplicatively.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lp
from .core import SymbolicSystem
from .errors import DimensionMismatch, ZeroDirection
from .rational import (Q, Q0, Q1, Vec, dot, is_zero, primitive_scale, unit,
                       vneg, vscale, vsub, zeros)


@dataclass(frozen=True)
class ConeGenerators:
    """A finitely generated cone: cone(rays) + span(lineality)."""

    rays: tuple
    lineality: tuple

    @property
    def is_zero_cone(self) -> bool:
        return not self.rays and not self.lineality

    def contains(self, v: Vec) -> bool:
        return cone_contains(self.rays, self.lineality, v)

    def members(self) -> tuple:
        """Generators plus negated lineality: a spanning positive family."""
        return self.rays + self.lineality + tuple(vneg(l) for l in self.lineality)


def cone_contains(rays, lineality, v: Vec) -> bool:
    """v in cone(rays) + span(lineality), decided by a feasibility LP."""
    if is_zero(v):
        return True
    gens = list(rays) + list(lineality)
    if not gens:
        return False
    k = len(gens)
    n = len(v)
    eqs = [([g[j] for g in gens], v[j]) for j in range(n)]
    ineqs = []
    for i in range(len(rays)):
        row = list(zeros(k))
        row[i] = Q(-1)
        ineqs.append((row, Q0))
    return lp.solve_lp(zeros(k), ineqs, eqs).is_optimal


def _prune_rays(rays: list, lineality: list) -> list:
    """Drop rays expressible by the remaining generators (keep-first)."""
    rays = list(dict.fromkeys(rays))
    changed = True
    while changed:
        changed = False
        for i, r in enumerate(rays):
            others = rays[:i] + rays[i + 1:]
            if cone_contains(tuple(others), tuple(lineality), r):
                rays.pop(i)
                changed = True
                break
    return rays


def cone_from_halfspaces(normals, dim: int):
    """Generators (rays, lineality) of ``{y | <h, y> >= 0 for h in normals}``.

    Classic double description descent from the whole space, with exact
    arithmetic and LP-based extremality pruning after each cut.
    """
    lineality = [unit(dim, i) for i in range(dim)]
    rays: list = []
    for h in normals:
        h = tuple(Q(x) for x in h)
        if is_zero(h):
            continue
        ldots = [dot(h, l) for l in lineality]
        k = next((i for i, d in enumerate(ldots) if d), None)
        if k is not None:
            # pivot the lineality direction that crosses the hyperplane
            l0 = lineality[k] if ldots[k] > 0 else vneg(lineality[k])
            d0 = abs(ldots[k])
            new_lin = []
            for i, l in enumerate(lineality):
                if i == k:
                    continue
                new_lin.append(vsub(l, vscale(ldots[i] / d0, l0)) if ldots[i] else l)
            rays = [vsub(r, vscale(dot(h, r) / d0, l0)) if dot(h, r) else r
                    for r in rays]
            rays.append(l0)
            lineality = new_lin
        else:
            pos, zero, neg = [], [], []
            for r in rays:
                d = dot(h, r)
                (pos if d > 0 else zero if not d else neg).append(r)
            combos = []
            for p in pos:
                dp = dot(h, p)
                for q in neg:
                    w = vsub(vscale(dp, q), vscale(dot(h, q), p))
                    if not is_zero(w):
                        combos.append(primitive_scale(w))
            rays = pos + zero + combos
        rays = [primitive_scale(r) for r in rays]
        rays = _prune_rays(rays, lineality)
    lineality = [primitive_scale(l) for l in lineality]
    return rays, lineality


def _reduce_mod_lineality(ray: Vec, lineality) -> Vec:
    """Orthogonal projection of ray onto the complement of span(lineality)."""
    ortho: list = []
    for l in lineality:
        v = list(l)
        for b in ortho:
            c = dot(v, b) / dot(b, b)
            if c:
                v = [x - c * y for x, y in zip(v, b)]
        if any(v):
            ortho.append(tuple(v))
    r = list(ray)
    for b in ortho:
        c = dot(r, b) / dot(b, b)
        if c:
            r = [x - c * y for x, y in zip(r, b)]
    return tuple(r)


def polar_generators(vectors, dim: int | None = None) -> ConeGenerators:
    """Generators of the positive polar ``{y | <y, v> >= 0 for all v}``.

    Rays are reduced modulo the lineality space and scaled primitive, so
    e.g. the polar of {(2,1)} comes out as cone{(2,1)} + span{(-1,2)}.
    ``dim`` is only needed when ``vectors`` is empty (the polar of the zero
    cone is the whole space).
    """
    vectors = [tuple(Q(x) for x in v) for v in vectors]
    if dim is None:
        if not vectors:
            raise ValueError("dim is required for an empty vector list")
        dim = len(vectors[0])
    rays, lineality = cone_from_halfspaces(vectors, dim)
    canon = []
    for r in rays:
        reduced = _reduce_mod_lineality(r, lineality)
        if not is_zero(reduced):
            canon.append(primitive_scale(reduced))
    canon = sorted(set(canon))
    return ConeGenerators(tuple(canon), tuple(lineality))


def vertex_enumeration(n: int, ineqs, eqs=()):
    """V-representation of ``{x | g.x <= h, e.x = f}``: (vertices, rays,
    lineality), computed by double description on the homogenization."""
    normals = []
    for g, h in ineqs:
        normals.append(tuple(-Q(x) for x in g) + (Q(h),))
    for e, f in eqs:
        row = tuple(Q(x) for x in e) + (-Q(f),)
        normals.append(row)
        normals.append(vneg(row))
    normals.append(tuple(zeros(n)) + (Q1,))
    gens, lin = cone_from_halfspaces(normals, n + 1)
    vertices = []
    rays = []
    for g in gens:
        t = g[n]
        if t > 0:
            vertices.append(tuple(x / t for x in g[:n]))
        elif not t:
            if not is_zero(g[:n]):
                rays.append(primitive_scale(g[:n]))
        else:  # pragma: no cover - t >= 0 is one of the halfspaces
            raise AssertionError("negative homogenization coordinate")
    lineality = []
    for l in lin:
        if l[n]:  # pragma: no cover - lineality is orthogonal to t >= 0
            raise AssertionError("homogenization coordinate in lineality")
        if not is_zero(l[:n]):
            lineality.append(primitive_scale(l[:n]))
    return (tuple(sorted(set(vertices))), tuple(sorted(set(rays))),
            tuple(lineality))


# ---------------------------------------------------------------------------
# directional eliminations on parametric systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Partition12:
    """Index split of a system's rows against a direction u:
    t1 = {<a_t, u> <= 0}, t2 = {<a_t, u> > 0}, t0 = {<a_t, u> = 0} (in t1)."""

    t1: tuple
    t2: tuple
    t0: tuple


def partition_by_direction(sys: SymbolicSystem, u: Vec) -> Partition12:
    t1, t2, t0 = [], [], []
    for i, row in enumerate(sys.all_rows()):
        d = dot(row.lhs, u)
        if d > 0:
            t2.append(i)
        else:
            t1.append(i)
            if not d:
                t0.append(i)
    return Partition12(tuple(t1), tuple(t2), tuple(t0))


def _check_direction(sys: SymbolicSystem, u) -> Vec:
    u = tuple(Q(x) for x in u)
    if len(u) != sys.n:
        raise DimensionMismatch(f"direction of dimension {len(u)} in R^{sys.n}")
    if is_zero(u):
        raise ZeroDirection("zero direction")
    return u


def _combine(row_t, row_s, dt, ds):
    lhs = tuple(ds * a - dt * b for a, b in zip(row_t.lhs, row_s.lhs))
    rhs = row_t.rhs.combine(ds, row_s.rhs, -dt)
    return (lhs, rhs)


def eliminate_cone_direction(sys: SymbolicSystem, u) -> SymbolicSystem:
    """Rows of a system for ``F(b) + cone{u}``.

    Keeps the rows with ``<a_t, u> <= 0`` and appends the pair combinations
    ``<a_s,u> a_t - <a_t,u> a_s`` over t1 x t2 (the right-hand sides combine
    the same way).  An empty t1 means the sum is all of R^n.
    """
    u = _check_direction(sys, u)
    rows = sys.all_rows()
    part = partition_by_direction(sys, u)
    if not part.t1:
        return SymbolicSystem.from_rows(sys.n, sys.m, ())
    out = [rows[t] for t in part.t1]
    for t in part.t1:
        dt = dot(rows[t].lhs, u)
        for s in part.t2:
            out.append(_combine(rows[t], rows[s], dt, dot(rows[s].lhs, u)))
    return SymbolicSystem.from_rows(sys.n, sys.m, out)


def eliminate_span_direction(sys: SymbolicSystem, u) -> SymbolicSystem:
    """Rows of a system for ``F(b) + span{u}``: the orthogonal rows stay,
    each strictly-negative row combines with each strictly-positive one."""
    u = _check_direction(sys, u)
    rows = sys.all_rows()
    part = partition_by_direction(sys, u)
    out = [rows[t] for t in part.t0]
    negative = [t for t in part.t1 if t not in part.t0]
    for t in negative:
        dt = dot(rows[t].lhs, u)
        for s in part.t2:
            out.append(_combine(rows[t], rows[s], dt, dot(rows[s].lhs, u)))
    return SymbolicSystem.from_rows(sys.n, sys.m, out)


# ---------------------------------------------------------------------------
# redundancy removal
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RedundancyReport:
    system: SymbolicSystem
    dropped_duplicate: tuple
    dropped_global: tuple
    dropped_local: tuple


def _joint_ineq(row, sys):
    """Row as an inequality over the joint (x, b) space."""
    return (row.lhs + tuple(-c for c in row.rhs.coeffs), row.rhs.constant)


def _implied_globally(row, others, sys) -> bool:
    """True iff the row holds on the joint (x, b) solution set of the others."""
    ineqs = [_joint_ineq(r, sys) for r in others]
    g, kappa = _joint_ineq(row, sys)
    res = lp.solve_lp(vneg(g), ineqs, n=sys.n + sys.m)
    return res.is_optimal and -res.value <= kappa


def _implied_at(row, others, b) -> bool:
    ineqs = [(r.lhs, r.rhs.evaluate(b)) for r in others]
    res = lp.solve_lp(vneg(row.lhs), ineqs, n=len(row.lhs))
    return res.is_optimal and -res.value <= row.rhs.evaluate(b)


def _dedupe(rows):
    seen = set()
    kept = []
    duplicates = []
    for row in rows:
        key = (row.lhs, row.rhs.coeffs, row.rhs.constant)
        if key in seen:
            duplicates.append(row)
        else:
            seen.add(key)
            kept.append(row)
    return kept, duplicates


def _prune_group(rows, implied, base_feasible):
    """Sequential implication pruning; returns (kept, global, local)."""
    dropped_global: list = []
    dropped_local: list = []
    if not base_feasible:
        return rows, dropped_global, dropped_local
    active = [True] * len(rows)
    for i, row in enumerate(rows):
        others = [rows[j] for j in range(len(rows)) if j != i and active[j]]
        verdict = implied(row, others)
        if verdict == "global":
            active[i] = False
            dropped_global.append(row)
        elif verdict == "local":
            active[i] = False
            dropped_local.append(row)
    return [r for r, a in zip(rows, active) if a], dropped_global, dropped_local


def remove_redundancy_detailed(sys: SymbolicSystem, at: Vec | None = None) -> RedundancyReport:
    """Drop duplicate rows (keep-first), then rows implied by the others.

    Regular rows are tested against the other regular rows and consistency
    rows against the other consistency rows; the domain conditions are
    deliberately not used as premises for the decision-space rows, so
    pieces that the unrestricted elimination produces survive even when the
    domain happens to dominate them (both systems are set-equal at every
    parameter).

    Without ``at`` the implication is tested over the joint (x, b) space,
    so only rows redundant for every parameter are dropped.  With ``at``
    the system is instantiated there; dropped rows that are not also
    globally redundant are flagged as locally dropped.  If a premise group
    is itself infeasible, its implication tests would be vacuous and the
    group is left untouched.
    """
    regular, dup_r = _dedupe(list(sys.rows))
    consistency, dup_c = _dedupe(list(sys.consistency_rows))
    if at is not None:
        at = tuple(Q(x) for x in at)

    # regular rows over (x, b), or over x at the given parameter
    if at is None:
        joint = [_joint_ineq(r, sys) for r in regular]
        reg_feasible = (not regular) or lp.solve_lp(
            zeros(sys.n + sys.m), joint).is_optimal
    else:
        reg_feasible = (not regular) or lp.feasible(
            [r.lhs for r in regular], [r.rhs.evaluate(at) for r in regular])

    def reg_verdict(row, others):
        if at is None:
            return "global" if _implied_globally(row, others, sys) else None
        if not _implied_at(row, others, at):
            return None
        return "global" if _implied_globally(row, others, sys) else "local"

    regular, reg_global, reg_local = _prune_group(regular, reg_verdict,
                                                  reg_feasible)

    # consistency rows live in b-space only: 0 <= phi(b)
    def cons_ineqs(rows):
        return [(vneg(r.rhs.coeffs), r.rhs.constant) for r in rows]

    cons_feasible = (not consistency) or lp.solve_lp(
        zeros(sys.m), cons_ineqs(consistency)).is_optimal

    def cons_implied_globally(row, others):
        res = lp.solve_lp(row.rhs.coeffs, cons_ineqs(others), n=sys.m)
        return res.is_optimal and res.value + row.rhs.constant >= 0

    def cons_verdict(row, others):
        if at is None:
            return "global" if cons_implied_globally(row, others) else None
        if row.rhs.evaluate(at) < 0:
            return None
        return "global" if cons_implied_globally(row, others) else "local"

    consistency, cons_global, cons_local = _prune_group(consistency,
                                                        cons_verdict,
                                                        cons_feasible)

    return RedundancyReport(
        SymbolicSystem.from_rows(sys.n, sys.m, regular + consistency),
        tuple(dup_r + dup_c), tuple(reg_global + cons_global),
        tuple(reg_local + cons_local))


def remove_redundancy(sys: SymbolicSystem, at: Vec | None = None) -> SymbolicSystem:
    return remove_redundancy_detailed(sys, at).system


# ---------------------------------------------------------------------------
# the epigraphical feasible-set system
# ---------------------------------------------------------------------------


def dedupe_rows(sys: SymbolicSystem) -> SymbolicSystem:
    """Drop exact duplicate rows (after canonical scaling), keep-first."""
    regular, _ = _dedupe(list(sys.rows))
    consistency, _ = _dedupe(list(sys.consistency_rows))
    return SymbolicSystem.from_rows(sys.n, sys.m, regular + consistency)


def epigraph_system(problem) -> SymbolicSystem:
    """Parametric system whose solution set at b is ``F(b) + Theta`` with
    Theta the polar cone of the objective family.

    Folds the cone elimination over the polar's rays and the span
    elimination over its lineality basis.  Redundancy is pruned between
    folds (the pair products grow multiplicatively); the final system is
    only deduplicated, so every row the last elimination produces is kept
    even when another row happens to dominate it.
    """
    gens = polar_generators(problem.objectives)
    steps = ([("cone", u) for u in gens.rays] +
             [("span", u) for u in gens.lineality])
    sys = problem.system()
    for index, (kind, u) in enumerate(steps):
        if kind == "cone":
            sys = eliminate_cone_direction(sys, u)
        else:
            sys = eliminate_span_direction(sys, u)
        if index + 1 < len(steps):
            sys = remove_redundancy(sys)
        else:
            sys = dedupe_rows(sys)
    return sys
