"""Subdifferentials of the feasible-set and Pareto-front mappings, their
Lipschitz moduli, and the single-objective value-function pipeline.

For a weight vector alpha >= 0 the defining graph inequality collapses, at
an anchor attaining the scalarized optimum, to the convex-analysis
subdifferential of the scalarized optimal value function at the nominal
parameter - which is exactly the negated polyhedron of optimal dual
multipliers.  A piece is therefore:

* empty when the scalarized program is unbounded (weight not dual
  consistent) or when the anchor does not attain the scalarized value;
* the negated dual-optimal face, divided by the weight's normalization
  factor, otherwise.

For q >= 2 the union over the continuum of normalized weights is inner
approximated on a rational simplex grid; every reported subgradient is a
true subgradient and every modulus is a certified lower bound, which is
recorded in the exactness flag.  For q = 1 the single weight is the whole
index set and everything is exact.  Euclidean normalization factors are
carried as exact squares; floats appear only in reports.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import lp, pareto, polyhedra
from .core import Problem, dual_norm_value
from .errors import (AnchorNotInGraph, AnchorNotOnFront, AnchorNotOptimal,
                     InternalError, LipPUnsupported, NotDualConsistent,
                     NotInDomS, OnDomainBoundary, SingleObjectiveRequired,
                     UnboundedScalarization)
from .rational import ExactSqrt, Q, Q0, Q1, Rat, Vec, dot, is_zero, vneg, zeros

IMAGE_NORMALIZED = "image-normalized"
COMPOSITE_NORMALIZED = "composite-normalized"
EXACT = "exact"
GRID_APPROXIMATION = "grid-approximation"


def default_resolution(q: int) -> int:
    if q == 1:
        return 1
    if q == 2:
        return 200
    if q == 3:
        return 40
    return 12


def simplex_grid(q: int, resolution: int) -> tuple:
    """All rational points of the unit simplex at granularity 1/resolution."""
    if q == 1:
        return ((Q1,),)
    points = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            points.append(prefix + (Q(remaining, resolution),))
            return
        for k in range(remaining + 1):
            rec(prefix + (Q(k, resolution),), remaining - k, slots - 1)

    rec((), resolution, q)
    return tuple(points)


@dataclass(frozen=True)
class GridPoint:
    alpha: Vec       # raw simplex weight, >= 0, sums to 1
    composite: Vec   # sum_i alpha_i c_i
    scale: ExactSqrt  # normalization factor for this grid mode


@dataclass(frozen=True)
class WeightGrid:
    """Simplex grid of weights with exact normalization data.

    ``image-normalized`` scales alpha to unit dual image norm (the Pareto
    front union index); ``composite-normalized`` scales the combined
    objective to unit dual decision norm (the feasible-set union index).
    Grid points whose combined objective vanishes cannot be normalized in
    composite mode and are skipped.
    """

    mode: str
    resolution: int
    points: tuple
    skipped_degenerate: int = 0

    @staticmethod
    def build(problem: Problem, mode: str, resolution: int | None = None) -> "WeightGrid":
        if mode not in (IMAGE_NORMALIZED, COMPOSITE_NORMALIZED):
            raise ValueError(f"unknown grid mode {mode!r}")
        if resolution is None:
            resolution = default_resolution(problem.q)
        if resolution < 1:
            raise ValueError("grid resolution must be >= 1")
        points = []
        skipped = 0
        for alpha in simplex_grid(problem.q, resolution):
            composite = problem.scalarize(alpha)
            if mode == COMPOSITE_NORMALIZED:
                if is_zero(composite):
                    skipped += 1
                    continue
                scale = dual_norm_value(problem.decision_norm, composite)
            else:
                scale = dual_norm_value(problem.image_norm, alpha)
            points.append(GridPoint(alpha, composite, scale))
        return WeightGrid(mode, resolution, tuple(points), skipped)


@dataclass(frozen=True)
class ScaledVector:
    """An exact rational vector divided by an exact normalization factor."""

    vector: Vec
    scale: ExactSqrt

    def floats(self) -> tuple:
        s = float(self.scale)
        return tuple(float(x) / s for x in self.vector)

    def l1(self) -> ExactSqrt:
        return ExactSqrt.of(sum((abs(x) for x in self.vector), Q0)).divide_by(self.scale)

    def __str__(self) -> str:
        from .rational import vecstr

        if self.scale.is_rational:
            return "(" + ",".join(str(Q(x) / self.scale.coeff) for x in self.vector) + ")"
        return f"({vecstr(self.vector)})/{self.scale}"


@dataclass(frozen=True)
class SubdiffPiece:
    """Per-weight slice of a subdifferential: the negated dual-optimal face
    of the scalarized program, divided by the normalization factor."""

    weight: Vec
    composite: Vec
    scale: ExactSqrt
    active: bool
    face: lp.DualFace | None

    def subgradient_vertices(self) -> tuple:
        """Normalized subgradients at the face's vertices (empty piece: ())."""
        if not self.active or self.face is None:
            return ()
        vertices, _rays = self.face.vrep()
        return tuple(ScaledVector(vneg(v), self.scale) for v in vertices)

    def max_l1(self) -> ExactSqrt | None:
        """Largest l1-norm over the piece; None when unbounded."""
        if not self.active or self.face is None:
            return None
        raw = self.face.max_l1()
        if raw is None:
            return None
        return ExactSqrt.of(raw).divide_by(self.scale)


@dataclass(frozen=True)
class SubdiffSet:
    """A weight-indexed union of polytopes of parameter-dual vectors.

    Grid results are inner approximations: every member is a genuine
    subgradient, so derived moduli are certified lower bounds.
    """

    kind: str           # "F" or "P"
    anchor: Vec
    nominal: Vec
    grid: WeightGrid
    pieces: tuple
    exactness: str

    def active_pieces(self) -> tuple:
        return tuple(p for p in self.pieces if p.active)

    def sample_subgradients(self, limit: int | None = None) -> tuple:
        out = []
        for piece in self.active_pieces():
            for sv in piece.subgradient_vertices():
                out.append((piece, sv))
                if limit is not None and len(out) >= limit:
                    return tuple(out)
        return tuple(out)


def _scalarized_value(problem: Problem, b: Vec, cache: dict, composite: Vec):
    """Optimal value of min <composite, x> over F(b); None when unbounded."""
    if composite in cache:
        return cache[composite]
    res = lp.solve(problem.rows, b, composite)
    if res.status == lp.INFEASIBLE:  # pragma: no cover - guarded by dom S check
        raise InternalError("scalarized program infeasible inside dom S")
    value = res.value if res.is_optimal else None
    cache[composite] = value
    return value


def _pieces_for_grid(problem: Problem, b: Vec, grid: WeightGrid, attained) -> tuple:
    cache: dict = {}
    pieces = []
    for point in grid.points:
        value = _scalarized_value(problem, b, cache, point.composite)
        active = value is not None and attained(point) == value
        face = None
        if active:
            face = lp.DualFace(problem.rows, b, point.composite, value)
        pieces.append(SubdiffPiece(point.alpha, point.composite, point.scale,
                                   active, face))
    return tuple(pieces)


def in_graph_epi_f(problem: Problem, b: Vec, x: Vec) -> bool:
    """(b, x) in gph E_F: some feasible f has x - f in the objective polar."""
    ineqs = list(zip(problem.rows, b))
    ineqs += [(c, dot(c, x)) for c in problem.objectives]
    return lp.solve_lp(zeros(problem.n), ineqs).is_optimal


def subdiff_F(problem: Problem, b_bar, x_bar, grid: WeightGrid | None = None) -> SubdiffSet:
    """Subdifferential of the feasible-set mapping at (b_bar, x_bar).

    Union over weights with unit dual decision norm of the combined
    objective; a weight contributes iff the anchor attains its scalarized
    optimal value at b_bar, and then contributes the negated dual face
    scaled by the normalization factor.
    """
    b_bar = tuple(Q(v) for v in b_bar)
    x_bar = tuple(Q(v) for v in x_bar)
    if not lp.in_dom_s(problem, b_bar):
        raise NotInDomS("no nondominated points at the nominal parameter")
    if not in_graph_epi_f(problem, b_bar, x_bar):
        raise AnchorNotInGraph("anchor is not in the epigraphical feasible set")
    if grid is None:
        grid = WeightGrid.build(problem, COMPOSITE_NORMALIZED)
    if grid.mode != COMPOSITE_NORMALIZED:
        raise ValueError("subdiff_F needs a composite-normalized grid")
    pieces = _pieces_for_grid(problem, b_bar, grid,
                              lambda point: dot(point.composite, x_bar))
    exactness = EXACT if problem.q == 1 else GRID_APPROXIMATION
    return SubdiffSet("F", x_bar, b_bar, grid, pieces, exactness)


def subdiff_P(problem: Problem, b_bar, p_bar, grid: WeightGrid | None = None) -> SubdiffSet:
    """Subdifferential of the Pareto-front mapping at (b_bar, p_bar), the
    union running over weights with unit dual image norm."""
    b_bar = tuple(Q(v) for v in b_bar)
    p_bar = tuple(Q(v) for v in p_bar)
    if not lp.in_dom_s(problem, b_bar):
        raise NotInDomS("no nondominated points at the nominal parameter")
    if not pareto.on_pareto_front(problem, b_bar, p_bar):
        raise AnchorNotOnFront("anchor image is not on the Pareto front")
    if grid is None:
        grid = WeightGrid.build(problem, IMAGE_NORMALIZED)
    if grid.mode != IMAGE_NORMALIZED:
        raise ValueError("subdiff_P needs an image-normalized grid")
    pieces = _pieces_for_grid(problem, b_bar, grid,
                              lambda point: dot(point.alpha, p_bar))
    exactness = EXACT if problem.q == 1 else GRID_APPROXIMATION
    return SubdiffSet("P", p_bar, b_bar, grid, pieces, exactness)


# ---------------------------------------------------------------------------
# Lipschitz moduli
# ---------------------------------------------------------------------------

TARGET_EF = "ef"
TARGET_EP = "ep"
TARGET_P = "p"


@dataclass(frozen=True)
class ModulusReport:
    """A computed Lipschitz modulus with its attaining data.

    ``finite`` is False when some piece is unbounded in l1-norm (the mapping
    is not Lipschitz-like); grid values are certified lower bounds unless
    ``exactness`` says exact.
    """

    target: str
    value: ExactSqrt | None
    finite: bool
    attaining_weight: Vec | None
    attaining_subgradient: ScaledVector | None
    exactness: str
    grid_resolution: int

    def value_float(self) -> float:
        if not self.finite:
            return float("inf")
        return float(self.value) if self.value is not None else 0.0


def canonical_anchor(problem: Problem, b) -> tuple:
    """Deterministic anchor (x, p) on gph S: the uniform scalarization when
    it is solvable, otherwise a certified strictly positive weighting."""
    b = tuple(Q(v) for v in b)
    if not lp.in_dom_s(problem, b):
        raise NotInDomS("no nondominated points at this parameter")
    uniform = (Q1,) * problem.q
    try:
        ip = pareto.pareto_point(problem, b, uniform)
    except UnboundedScalarization:
        lam = lp.positive_weight_certificate(problem.rows, problem.objectives)
        if lam is None:  # pragma: no cover - contradicts in_dom_s
            raise InternalError("dom S membership without positive weighting")
        ip = pareto.pareto_point(problem, b, lam)
    return ip.witness, ip.p


def lip_modulus(problem: Problem, target: str, b_bar=None, anchor=None,
                grid: WeightGrid | None = None) -> ModulusReport:
    """Largest l1-norm of a subgradient: the Lipschitz modulus of the
    epigraphical mapping named by ``target`` ("ef", "ep", or "p" for q=1).

    Each active piece contributes one exact LP (the l1-norm is linear on
    the dual face since subgradients are negated multipliers); the maximum
    over pieces is taken with exact squared comparisons.
    """
    if target not in (TARGET_EF, TARGET_EP, TARGET_P):
        raise ValueError(f"unknown modulus target {target!r}")
    if target == TARGET_P and problem.q != 1:
        raise LipPUnsupported("lip P has no computation formula for q >= 2; "
                              "only the lower bound lip E_P is available")
    b_bar = tuple(Q(v) for v in (b_bar if b_bar is not None else problem.nominal))
    if anchor is None:
        x_anchor, p_anchor = canonical_anchor(problem, b_bar)
        anchor = x_anchor if target == TARGET_EF else p_anchor
    else:
        anchor = tuple(Q(v) for v in anchor)
    if target == TARGET_EF:
        sub = subdiff_F(problem, b_bar, anchor, grid)
    else:
        sub = subdiff_P(problem, b_bar, anchor, grid)

    best: ExactSqrt | None = None
    best_piece = None
    for piece in sub.active_pieces():
        piece_max = piece.max_l1()
        if piece_max is None:
            return ModulusReport(target, None, False, piece.weight, None,
                                 sub.exactness, sub.grid.resolution)
        if best is None or best < piece_max:
            best = piece_max
            best_piece = piece
    if best is None:
        return ModulusReport(target, ExactSqrt.of(0), True, None, None,
                             sub.exactness, sub.grid.resolution)
    lam = best_piece.face.argmax_l1()
    attaining = ScaledVector(vneg(lam), best_piece.scale)
    return ModulusReport(target, best, True, best_piece.weight, attaining,
                         sub.exactness, sub.grid.resolution)


# ---------------------------------------------------------------------------
# the single-objective (LP) pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValueFunction:
    """Optimal value as a max of affine pieces on a polyhedral domain.

    Obtained without solving any program at a specific parameter: the
    epigraphical system for the single objective is, row by row, a negative
    multiple of the objective, and normalizing each row yields one piece;
    the consistency rows are the domain conditions.
    """

    pieces: tuple
    domain_conditions: tuple

    def in_domain(self, b) -> bool:
        return all(cond.evaluate(b) >= 0 for cond in self.domain_conditions)

    def strictly_inside(self, b) -> bool:
        return all(cond.evaluate(b) > 0 for cond in self.domain_conditions)

    def value(self, b) -> Rat | None:
        """max over pieces inside the domain, None (infeasible) outside."""
        b = tuple(Q(v) for v in b)
        if not self.in_domain(b):
            return None
        return max(piece.evaluate(b) for piece in self.pieces)

    def active_piece_indices(self, b) -> tuple:
        b = tuple(Q(v) for v in b)
        values = [piece.evaluate(b) for piece in self.pieces]
        top = max(values)
        return tuple(i for i, v in enumerate(values) if v == top)


def _multiple_of(lhs: Vec, c: Vec) -> Rat | None:
    """k with lhs = k*c, or None."""
    k = None
    for a, cj in zip(lhs, c):
        if not cj:
            if a:
                return None
            continue
        ratio = a / cj
        if k is None:
            k = ratio
        elif k != ratio:
            return None
    return k


def lp_value_function(problem: Problem) -> ValueFunction:
    """Piecewise-affine optimal value function of a single-objective
    problem, from the epigraphical system alone (no optimal solution is
    needed anywhere).  Requires dual consistency, else the program is
    unsolvable for every parameter."""
    if problem.q != 1:
        raise SingleObjectiveRequired("value function needs q = 1")
    c = problem.objectives[0]
    if not lp.dual_consistent(problem.rows, c):
        raise NotDualConsistent("-c is not in the conic hull of the rows")
    sys = polyhedra.epigraph_system(problem)
    pieces = []
    for row in sys.rows:
        k = _multiple_of(row.lhs, c)
        if k is None or k >= 0:
            raise InternalError("row-not-multiple-of-c: epigraphical row "
                                f"{row} is not a negative multiple of the objective")
        pieces.append(row.rhs.scale(Q1 / k))
    if not pieces:  # pragma: no cover - dual consistency forces a piece
        raise InternalError("no value pieces for a dual-consistent objective")
    conditions = tuple(row.rhs for row in sys.consistency_rows)
    return ValueFunction(tuple(pieces), conditions)


def _convex_hull_vertices(points) -> tuple:
    """Extreme points of conv(points): drop anything in the hull of the rest."""
    pts = sorted(set(points))
    keep = list(pts)
    changed = True
    while changed:
        changed = False
        for i, v in enumerate(keep):
            others = keep[:i] + keep[i + 1:]
            if not others:
                break
            k = len(others)
            eqs = [([pt[j] for pt in others], v[j]) for j in range(len(v))]
            eqs.append(([Q1] * k, Q1))
            ineqs = []
            for t in range(k):
                g = list(zeros(k))
                g[t] = Q(-1)
                ineqs.append((g, Q0))
            if lp.solve_lp(zeros(k), ineqs, eqs).is_optimal:
                keep.pop(i)
                changed = True
                break
    return tuple(keep)


def subdiff_P_lp(problem: Problem, b_bar=None) -> SubdiffSet:
    """Exact subdifferential of the optimal value function at b_bar via the
    max-formula: the convex hull of the gradients of the active pieces.

    Requires b_bar strictly inside the value-function domain so the domain
    conditions are locally inactive; cross-checked against the negated
    dual-optimal face.
    """
    vf = lp_value_function(problem)
    b_bar = tuple(Q(v) for v in (b_bar if b_bar is not None else problem.nominal))
    if not vf.strictly_inside(b_bar):
        raise OnDomainBoundary("a domain condition is active or violated at "
                               "the nominal parameter")
    active = vf.active_piece_indices(b_bar)
    gradients = [vf.pieces[i].coeffs for i in active]
    vertices = _convex_hull_vertices(gradients)

    c = problem.objectives[0]
    face = lp.dual_face(problem.rows, b_bar, c)
    face_vertices, face_rays = face.vrep()
    if face_rays:
        raise InternalError("unbounded dual face strictly inside the domain")
    negated = tuple(sorted(vneg(v) for v in face_vertices))
    if negated != tuple(sorted(vertices)):
        raise InternalError("max-formula subdifferential disagrees with the "
                            "dual-optimal face")

    value = vf.value(b_bar)
    piece = SubdiffPiece((Q1,), c, ExactSqrt.of(1), True,
                         lp.DualFace(problem.rows, b_bar, c, value))
    return SubdiffSet("P", (value,), b_bar, WeightGrid(IMAGE_NORMALIZED, 1,
                      (GridPoint((Q1,), c, ExactSqrt.of(1)),)), (piece,), EXACT)


@dataclass(frozen=True)
class LpRelations:
    """The q = 1 identities: lip P = lip E_P = ||c||_* lip E_F, and the
    exact proportionality of the two subdifferentials."""

    lip_p: ExactSqrt
    lip_ep: ExactSqrt
    lip_ef: ExactSqrt
    norm_c_dual: ExactSqrt
    proportionality_ok: bool
    subdiff_p_vertices: tuple


def lp_relations(problem: Problem, b_bar=None, x_bar=None) -> LpRelations:
    """Evaluate the single-objective relations at an optimal anchor.

    The subdifferential of P comes from the value-function max formula; the
    subdifferential of F comes from LP duality (negated dual face over the
    dual decision norm).  Proportionality is asserted as exact V-rep set
    equality, with the euclidean scale kept squared-exact.
    """
    if problem.q != 1:
        raise SingleObjectiveRequired("lp_relations needs q = 1")
    b_bar = tuple(Q(v) for v in (b_bar if b_bar is not None else problem.nominal))
    c = problem.objectives[0]
    outcome = lp.solve(problem.rows, b_bar, c)
    if not outcome.is_optimal:
        raise AnchorNotOptimal(f"program at the nominal parameter is {outcome.status}")
    if x_bar is None:
        x_bar = outcome.point
    else:
        x_bar = tuple(Q(v) for v in x_bar)
        if not problem.feasible(b_bar, x_bar) or dot(c, x_bar) != outcome.value:
            raise AnchorNotOptimal("anchor is not an optimal solution")

    sub_p = subdiff_P_lp(problem, b_bar)
    p_vertices = tuple(sorted(_p_vertex_list(sub_p)))
    lip_ep = max((ExactSqrt.of(sum((abs(x) for x in v), Q0)) for v in p_vertices),
                 default=ExactSqrt.of(0))
    norm_c = dual_norm_value(problem.decision_norm, c)
    lip_ef = lip_ep.divide_by(norm_c)

    # independent route for ||c||_* * subdiff_F: the negated dual face itself
    face = lp.dual_face(problem.rows, b_bar, c)
    face_vertices, face_rays = face.vrep()
    scaled_f = tuple(sorted(vneg(v) for v in face_vertices))
    ok = not face_rays and scaled_f == p_vertices
    return LpRelations(lip_ep, lip_ep, lip_ef, norm_c, ok, p_vertices)


def _p_vertex_list(sub_p: SubdiffSet) -> tuple:
    piece = sub_p.pieces[0]
    vertices, _ = piece.face.vrep()
    return tuple(vneg(v) for v in vertices)
