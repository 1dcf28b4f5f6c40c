"""Nondominance tests, domination repair, and Pareto-front membership.

Nondominance of a feasible point is decided by one LP that maximizes the
total slack of a dominating point; the repair procedure walks the staged
scalar programs (minimize objective j subject to not worsening any image
coordinate) and is guaranteed to land on a nondominated point after at most
q stages.  Membership in the epigraphical Pareto front reduces to a single
feasibility program because every feasible image point is dominated by a
nondominated one.

The module also owns the image-space view: a parametric system for
``C(F(b)) + R^q_+`` obtained by projecting the decision variables out, and
the list of its faces that carry strictly positive exposing weights - those
faces make up exactly the Pareto front, which is what the Monte-Carlo
distance estimators sample against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import lp, polyhedra
from .core import AffineForm, Problem, SymbolicSystem
from .errors import (InfeasiblePoint, InternalError, NonpositiveWeight,
                     NotInDomS, UnboundedScalarization, InfeasibleProblem)
from .rational import Q, Q0, Q1, Vec, dot, is_zero, unit, zeros


@dataclass(frozen=True)
class ImagePoint:
    """An image vector (c_1.x, ..., c_q.x) with its witness x when known."""

    p: Vec
    witness: Vec | None = None


def _require_feasible(problem: Problem, b: Vec, x: Vec):
    if len(x) != problem.n:
        raise InfeasiblePoint("point of wrong dimension")
    if not problem.feasible(b, x):
        raise InfeasiblePoint("point violates the constraint system")


def _domination_lp(problem: Problem, b: Vec, x0: Vec):
    """max sum(s) s.t. y feasible, C(y) + s <= C(x0), s >= 0.

    Returns (slack_sum, dominating_y); the slack sum is None when the
    program is unbounded (then y still witnesses domination).
    """
    n, q = problem.n, problem.q
    image = problem.image(x0)
    ineqs = []
    for a, bt in zip(problem.rows, b):
        ineqs.append((tuple(a) + zeros(q), bt))
    for i, c in enumerate(problem.objectives):
        ineqs.append((tuple(c) + unit(q, i), image[i]))
    for i in range(q):
        ineqs.append((zeros(n) + tuple(-x for x in unit(q, i)), Q0))
    objective = zeros(n) + tuple(Q(-1) for _ in range(q))
    res = lp.solve_lp(objective, ineqs)
    if res.status == lp.UNBOUNDED:
        point = tuple(a + r for a, r in zip(res.point, res.ray))
        return None, point[:n]
    if not res.is_optimal:  # pragma: no cover - x0 itself is feasible
        raise InternalError("domination program lost its feasible point")
    return -res.value, res.point[:n]


def is_nondominated(problem: Problem, b: Vec, x0: Vec) -> bool:
    """True iff no feasible point weakly improves every objective with one
    strict improvement.  Raises ``infeasible-point`` when x0 is not feasible."""
    b = tuple(Q(v) for v in b)
    x0 = tuple(Q(v) for v in x0)
    _require_feasible(problem, b, x0)
    slack, _ = _domination_lp(problem, b, x0)
    return slack is not None and slack == 0


def dominating_point(problem: Problem, b: Vec, x0: Vec) -> Vec | None:
    """A feasible point dominating x0, or None when x0 is nondominated."""
    b = tuple(Q(v) for v in b)
    x0 = tuple(Q(v) for v in x0)
    _require_feasible(problem, b, x0)
    slack, y = _domination_lp(problem, b, x0)
    if slack is not None and slack == 0:
        return None
    return y


def dominate_to_nondominated(problem: Problem, b: Vec, x0: Vec) -> Vec:
    """Walk x0 to a nondominated point without worsening any objective.

    Stage j minimizes objective j over the feasible points whose whole image
    is still <= the current image; at most q stages are needed, with an
    early exit as soon as nondominance holds.  An unbounded stage program
    certifies that no nondominated point exists at this parameter.
    """
    b = tuple(Q(v) for v in b)
    x = tuple(Q(v) for v in x0)
    _require_feasible(problem, b, x)
    for j in range(problem.q):
        if is_nondominated(problem, b, x):
            return x
        image = problem.image(x)
        ineqs = list(zip(problem.rows, b))
        ineqs += [(c, image[i]) for i, c in enumerate(problem.objectives)]
        res = lp.solve_lp(problem.objectives[j], ineqs)
        if res.status == lp.UNBOUNDED:
            raise NotInDomS(f"stage-{j + 1} program is unbounded: "
                            "no nondominated points at this parameter")
        if not res.is_optimal:  # pragma: no cover - x is feasible for the stage
            raise InternalError("stage program lost its feasible point")
        x = res.point
    if not is_nondominated(problem, b, x):  # pragma: no cover - by the lemma
        raise InternalError("stage procedure ended on a dominated point")
    return x


def pareto_point(problem: Problem, b: Vec, weights: Vec) -> ImagePoint:
    """Minimize the strictly positively weighted objective sum; the argmin
    is nondominated, so its image lies on the Pareto front."""
    weights = tuple(Q(w) for w in weights)
    if len(weights) != problem.q or any(w <= 0 for w in weights):
        raise NonpositiveWeight("weights must be strictly positive")
    b = tuple(Q(v) for v in b)
    res = lp.solve(problem.rows, b, problem.scalarize(weights))
    if res.status == lp.INFEASIBLE:
        raise InfeasibleProblem("feasible set is empty at this parameter")
    if res.status == lp.UNBOUNDED:
        raise UnboundedScalarization("scalarized program is unbounded")
    return ImagePoint(problem.image(res.point), res.point)


def in_epi_pareto(problem: Problem, b: Vec, p: Vec) -> bool:
    """p lies in the Pareto front plus the nonnegative orthant iff some
    feasible point has image <= p; requires nondominated points to exist.

    A feasible witness already certifies the nonempty feasible set, so the
    common true path costs a single program.
    """
    b = tuple(Q(v) for v in b)
    p = tuple(Q(v) for v in p)
    if not lp.positive_weight_exists(problem.rows, problem.objectives):
        raise NotInDomS("no weighting is bounded: dom S is empty")
    ineqs = list(zip(problem.rows, b))
    ineqs += [(c, p[i]) for i, c in enumerate(problem.objectives)]
    if lp.solve_lp(zeros(problem.n), ineqs).is_optimal:
        return True
    if not lp.feasible(problem.rows, b):
        raise NotInDomS("no nondominated points at this parameter")
    return False


def on_pareto_front(problem: Problem, b: Vec, p: Vec) -> bool:
    """Exact membership of an image vector in the Pareto front at b."""
    b = tuple(Q(v) for v in b)
    p = tuple(Q(v) for v in p)
    eqs = [(c, p[i]) for i, c in enumerate(problem.objectives)]
    pre = lp.solve_lp(zeros(problem.n), list(zip(problem.rows, b)), eqs)
    if not pre.is_optimal:
        return False
    x = pre.point
    slack, _ = _domination_lp(problem, b, x)
    return slack is not None and slack == 0


# ---------------------------------------------------------------------------
# the image-space (Pareto epigraph) system and its front faces
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def image_epigraph_system(problem: Problem) -> SymbolicSystem:
    """Parametric system in image coordinates whose solution set at b is
    ``C(F(b)) + R^q_+`` (= the epigraphical Pareto front on dom S).

    Built by span-eliminating every decision coordinate from the joint
    system {x feasible, C(x) <= p} and dropping the dead columns.
    """
    n, q, m = problem.n, problem.q, problem.m
    rows = []
    for t, a in enumerate(problem.rows):
        rows.append((tuple(a) + zeros(q), AffineForm.unit(m, t)))
    zero_form = AffineForm.of(zeros(m))
    for i, c in enumerate(problem.objectives):
        rows.append((tuple(c) + tuple(-x for x in unit(q, i)), zero_form))
    sys = SymbolicSystem.from_rows(n + q, m, rows)
    for j in range(n):
        direction = unit(n + q, j)
        sys = polyhedra.remove_redundancy(
            polyhedra.eliminate_span_direction(sys, direction))
    projected = []
    for row in sys.all_rows():
        if not is_zero(row.lhs[:n]):  # pragma: no cover - elimination contract
            raise InternalError("decision coordinate survived projection")
        projected.append((row.lhs[n:], row.rhs))
    return SymbolicSystem.from_rows(q, m, projected)


@lru_cache(maxsize=None)
def pareto_face_candidates(problem: Problem) -> tuple:
    """Active-row subsets of the image system that admit a strictly positive
    exposing weight; their union over any b in dom S is exactly the front.

    The filter is parameter-free: it only involves the row normals.
    """
    sys = image_epigraph_system(problem)
    q = problem.q
    normals = [tuple(-x for x in row.lhs) for row in sys.rows]
    passing = []
    for mask in range(1, 1 << len(normals)):
        subset = tuple(i for i in range(len(normals)) if mask >> i & 1)
        k = len(subset)
        # mu >= 0 supported on the subset with sum mu_j w_j >= 1 componentwise
        ineqs = []
        for i in range(k):
            row = list(zeros(k))
            row[i] = Q(-1)
            ineqs.append((row, Q0))
        for coord in range(q):
            ineqs.append(([-normals[j][coord] for j in subset], Q(-1)))
        if lp.solve_lp(zeros(k), ineqs).is_optimal:
            passing.append(subset)
    return tuple(passing)


def pareto_face_systems(problem: Problem, b: Vec):
    """Concrete (equalities, inequalities) H-representations, one per
    nonempty front face of the image polyhedron at b."""
    sys = image_epigraph_system(problem)
    b = tuple(Q(v) for v in b)
    if any(row.rhs.evaluate(b) < 0 for row in sys.consistency_rows):
        return []
    rows = [(row.lhs, row.rhs.evaluate(b)) for row in sys.rows]
    faces = []
    for subset in pareto_face_candidates(problem):
        eqs = [rows[j] for j in subset]
        ineqs = [rows[j] for j in range(len(rows)) if j not in subset]
        faces.append((eqs, ineqs))
    return faces
