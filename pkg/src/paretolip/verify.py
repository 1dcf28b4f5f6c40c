"""Definition-level oracles: Monte-Carlo ratio estimates for Lipschitz
moduli, exact subgradient-inequality checks, and convexity sampling.

All samples are rationals with bounded denominators, so every
correctness-critical comparison is exact; floats appear only in the
reported estimates.  Sample streams are derived per index from the seed, so
identical configurations give bit-identical results regardless of how the
loop is scheduled.

Distances are exact as well: linear programs for the polyhedral norms and
active-set enumeration (projection onto each candidate affine hull) for the
Euclidean norm, where the squared distance stays rational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from . import lp, pareto, polyhedra, sensitivity
from .core import NormSpec, Problem, SymbolicSystem
from .errors import (AnchorNotInGraph, AnchorNotOnFront, EmptySet,
                     InfeasibleProblem, NotInDomS, UnboundedScalarization)
from .rational import (ExactSqrt, Q, Q0, Q1, Rat, Vec, dot,
                       project_onto_affine, unit, vsub, zeros)


@dataclass(frozen=True)
class SampleConfig:
    """Reproducible rational sampling plan around a nominal parameter."""

    radius: Rat
    samples: int
    seed: int
    denominator_bound: int = 64

    def stream(self, index: int) -> random.Random:
        return random.Random(self.seed * 1_000_003 + index)


def _rand_signed(rng: random.Random, bound: int) -> Rat:
    return Q(rng.randint(-bound, bound), bound)


def _rand_unit(rng: random.Random, bound: int) -> Rat:
    return Q(rng.randint(0, bound), bound)


def _perturb(rng: random.Random, center: Vec, radius, bound: int) -> Vec:
    r = Q(radius)
    return tuple(c + r * _rand_signed(rng, bound) for c in center)


def _positive_weights(rng: random.Random, q: int, bound: int) -> Vec:
    return tuple(Q(rng.randint(1, bound), bound) for _ in range(q))


def _front_sampler(problem: Problem):
    """Sampler of Pareto-front points at a given parameter.

    Random strictly positive weightings are tried first; when the sampled
    weighting is unbounded (instances can have a thin cone of bounded
    weightings) the draw is mixed step by step toward a certified bounded
    weighting, which always exists on dom S.  An infeasible parameter
    yields None.
    """
    cert = lp.positive_weight_certificate(problem.rows, problem.objectives)

    def candidates(w):
        yield w
        if cert is not None:
            for t_num in (1, 2, 3):
                t = Q(t_num, 4)
                yield tuple((Q1 - t) * a + t * c for a, c in zip(w, cert))
            yield cert

    def sample(rng: random.Random, b: Vec, bound: int):
        w = _positive_weights(rng, problem.q, bound)
        for weights in candidates(w):
            try:
                return pareto.pareto_point(problem, b, weights)
            except UnboundedScalarization:
                continue
            except InfeasibleProblem:
                return None
        return None

    return sample


# ---------------------------------------------------------------------------
# exact distances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistanceResult:
    value: ExactSqrt
    point: Vec


def distance_to_set(z: Vec, ineqs, norm: NormSpec, eqs=()) -> DistanceResult:
    """Exact distance from z to {x | g.x <= h, e.x = f} in the given norm.

    l1/linf distances are one LP each; the Euclidean distance enumerates
    projections onto the affine hulls of all candidate active sets (the
    squared value stays rational).  Raises ``empty-set`` when the system has
    no solutions.
    """
    z = tuple(Q(v) for v in z)
    n = len(z)
    ineqs = [(tuple(Q(x) for x in g), Q(h)) for g, h in ineqs]
    eqs = [(tuple(Q(x) for x in e), Q(f)) for e, f in eqs]

    if norm.kind in ("l1", "linf"):
        return _distance_lp(z, ineqs, eqs, norm.kind)

    best: Rat | None = None
    best_point = None
    eq_rows = [list(e) for e, _ in eqs]
    eq_rhs = [f for _, f in eqs]
    for k in range(0, n + 1):
        for subset in combinations(range(len(ineqs)), k):
            rows = eq_rows + [list(ineqs[i][0]) for i in subset]
            rhs = eq_rhs + [ineqs[i][1] for i in subset]
            x = project_onto_affine(z, rows, rhs)
            if x is None:
                continue
            if any(dot(g, x) > h for g, h in ineqs):
                continue
            d2 = sum(((a - b) * (a - b) for a, b in zip(z, x)), Q0)
            if best is None or d2 < best:
                best = d2
                best_point = x
    if best is None:
        raise EmptySet("no feasible point for the distance target")
    return DistanceResult(ExactSqrt.sqrt_of(best), best_point)


def _distance_lp(z, ineqs, eqs, kind):
    n = len(z)
    aux = 1 if kind == "linf" else n
    total = n + aux
    lifted = [(tuple(g) + zeros(aux), h) for g, h in ineqs]
    for i in range(n):
        for sign in (Q1, Q(-1)):
            row = list(zeros(total))
            row[i] = sign
            if kind == "linf":
                row[n] = Q(-1)
            else:
                row[n + i] = Q(-1)
            lifted.append((tuple(row), sign * z[i]))
    lifted_eqs = [(tuple(e) + zeros(aux), f) for e, f in eqs]
    objective = zeros(n) + tuple(Q1 for _ in range(aux)) if kind == "l1" else \
        zeros(n) + (Q1,)
    res = lp.solve_lp(objective, lifted, lifted_eqs)
    if res.status == lp.INFEASIBLE:
        raise EmptySet("no feasible point for the distance target")
    return DistanceResult(ExactSqrt.of(res.value), res.point[:n])


def distance_to_instantiated(z: Vec, sys: SymbolicSystem, b: Vec,
                             norm: NormSpec) -> DistanceResult:
    ineqs, cvals = sys.instantiate(b)
    if any(v < 0 for v in cvals):
        raise EmptySet("consistency condition fails at this parameter")
    return distance_to_set(z, [(row_lhs, rhs) for row_lhs, rhs in ineqs], norm)


# ---------------------------------------------------------------------------
# empirical Lipschitz estimates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalEstimate:
    """A certified lower estimate of a Lipschitz modulus from sampling."""

    mapping: str
    value: float
    ratio_squared: Rat
    finite: bool
    witness: tuple | None   # (b, b_prime, z) attaining the max ratio
    samples_used: int
    skipped: int


def _front_distance(problem: Problem, b: Vec, z: Vec,
                    norm: NormSpec) -> ExactSqrt | None:
    """Distance from z to the Pareto front at b; None when the front is
    empty, computed as the min over its strictly-positively-exposed faces."""
    best: DistanceResult | None = None
    for eqs, ineqs in pareto.pareto_face_systems(problem, b):
        try:
            cand = distance_to_set(z, ineqs, norm, eqs)
        except EmptySet:
            continue
        if best is None or cand.value < best.value:
            best = cand
    return best.value if best is not None else None


def empirical_lip(problem: Problem, mapping: str, b_bar, anchor,
                  config: SampleConfig) -> EmpiricalEstimate:
    """Monte-Carlo lower bound on the Lipschitz modulus of one mapping.

    Samples pairs (b, b') in the sup-norm ball around b_bar and points
    z in the mapping's value at b (through strictly positive
    scalarizations, plus recession shifts for the epigraphical mappings),
    then maximizes dist(z, M(b')) / ||b - b'||_inf with exact squared-ratio
    comparisons.  0/0 ratios are skipped.
    """
    if mapping not in ("EF", "EP", "P"):
        raise ValueError(f"unknown mapping {mapping!r}")
    b_bar = tuple(Q(v) for v in b_bar)
    anchor = tuple(Q(v) for v in anchor)
    bound = config.denominator_bound

    if mapping == "EF":
        target_sys = polyhedra.epigraph_system(problem)
        norm = problem.decision_norm
        if not sensitivity.in_graph_epi_f(problem, b_bar, anchor):
            raise AnchorNotInGraph("anchor not in the epigraphical feasible set")
        shift_gens = polyhedra.polar_generators(problem.objectives).members()
    elif mapping == "EP":
        target_sys = pareto.image_epigraph_system(problem)
        norm = problem.image_norm
        if not pareto.in_epi_pareto(problem, b_bar, anchor):
            raise AnchorNotInGraph("anchor not in the epigraphical Pareto front")
        shift_gens = tuple(unit(problem.q, i) for i in range(problem.q))
    else:
        target_sys = None
        norm = problem.image_norm
        if not pareto.on_pareto_front(problem, b_bar, anchor):
            raise AnchorNotInGraph("anchor not on the Pareto front")
        shift_gens = ()

    sampler = _front_sampler(problem)
    best_sq: Rat = Q0
    best_witness = None
    finite = True
    used = 0
    skipped = 0
    for i in range(config.samples):
        rng = config.stream(i)
        b = _perturb(rng, b_bar, config.radius, bound)
        b_prime = _perturb(rng, b_bar, config.radius, bound)
        ip = sampler(rng, b, bound)
        if ip is None:
            skipped += 1
            continue
        if mapping == "EF":
            z = ip.witness
        else:
            z = ip.p
        if shift_gens and rng.randint(0, 1):
            r = Q(config.radius)
            for g in shift_gens:
                t = r * _rand_unit(rng, bound)
                if t:
                    z = tuple(a + t * x for a, x in zip(z, g))
        used += 1

        denom = max((abs(x - y) for x, y in zip(b, b_prime)), default=Q0)
        if mapping == "P":
            dist = _front_distance(problem, b_prime, z, norm)
        else:
            try:
                dist = distance_to_instantiated(z, target_sys, b_prime, norm).value
            except EmptySet:
                dist = None
        if dist is None:
            finite = False
            best_witness = (b, b_prime, z)
            break
        d2 = dist.squared
        if not d2 and not denom:
            continue
        if not denom:  # pragma: no cover - z in M(b) = M(b') forces d = 0
            finite = False
            best_witness = (b, b_prime, z)
            break
        ratio_sq = d2 / (denom * denom)
        if ratio_sq > best_sq:
            best_sq = ratio_sq
            best_witness = (b, b_prime, z)

    value = float("inf") if not finite else float(ExactSqrt.sqrt_of(best_sq)) \
        if best_sq else 0.0
    return EmpiricalEstimate(mapping, value, best_sq, finite, best_witness,
                             used, skipped)


# ---------------------------------------------------------------------------
# the interval-mapping fixture (strict epigraphical inequality witness)
# ---------------------------------------------------------------------------


def interval_fixture_estimate(kind: str, config: SampleConfig) -> EmpiricalEstimate:
    """Ratio estimate at (0, 0) for the interval mapping y -> [y, 2y] on
    y >= 0 (and {0} below), or its epigraphical version adding [0, inf).

    The mapping's modulus is 2 while the epigraphical one is 1, so the two
    estimates exhibit a strict gap between lip E_M and lip M.
    """
    if kind not in ("M", "EM"):
        raise ValueError("kind must be 'M' or 'EM'")
    bound = config.denominator_bound
    r = Q(config.radius)
    best_sq: Rat = Q0
    witness = None
    used = 0
    for i in range(config.samples):
        rng = config.stream(i)
        y = r * _rand_signed(rng, bound)
        y_prime = r * _rand_signed(rng, bound)
        if y >= 0:
            z = y * (Q1 + _rand_unit(rng, bound))
        else:
            z = Q0
        used += 1
        lo, hi = (y_prime, 2 * y_prime) if y_prime >= 0 else (Q0, Q0)
        if kind == "M":
            d = lo - z if z < lo else (z - hi if z > hi else Q0)
        else:
            d = lo - z if z < lo else Q0
        denom = abs(y - y_prime)
        if not d and not denom:
            continue
        ratio_sq = d * d / (denom * denom)
        if ratio_sq > best_sq:
            best_sq = ratio_sq
            witness = ((y,), (y_prime,), (z,))
    value = float(ExactSqrt.sqrt_of(best_sq)) if best_sq else 0.0
    return EmpiricalEstimate(f"fixture-{kind}", value, best_sq, True, witness,
                             used, 0)


# ---------------------------------------------------------------------------
# exact inequality checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    ok: bool
    witness: tuple | None
    samples_used: int
    skipped: int

    def __bool__(self) -> bool:
        return self.ok


def _graph_samples(problem: Problem, b_bar: Vec, config: SampleConfig):
    """Yield (b, x) in gph S: random parameters in the ball, nondominated
    witnesses through random strictly positive scalarizations (falling back
    to a certified bounded weighting when the draw is unbounded)."""
    bound = config.denominator_bound
    sampler = _front_sampler(problem)
    produced = 0
    index = 0
    while produced < config.samples and index < 20 * config.samples + 100:
        rng = config.stream(index)
        index += 1
        b = _perturb(rng, b_bar, config.radius, bound)
        ip = sampler(rng, b, bound)
        if ip is None:
            continue
        produced += 1
        yield b, ip


def subgradient_check(problem: Problem, kind: str, weight, y, b_bar, anchor,
                      config: SampleConfig) -> CheckOutcome:
    """Exact sampled test of a subgradient inequality.

    kind "F": weight is the combined decision-space objective c and the
    inequality is <y, b - b_bar> <= <c, x - x_bar> on gph S; kind "P":
    weight is the image-space vector alpha and the right side is
    <alpha, p - p_bar> on gph P.  The pair (weight, y) must be scaled
    consistently (both raw or both normalized); the test is scale
    invariant, so raw rational data keeps it exact.
    """
    if kind not in ("F", "P"):
        raise ValueError("kind must be 'F' or 'P'")
    b_bar = tuple(Q(v) for v in b_bar)
    anchor = tuple(Q(v) for v in anchor)
    weight = tuple(Q(v) for v in weight)
    y = tuple(Q(v) for v in y)
    if kind == "F":
        if not sensitivity.in_graph_epi_f(problem, b_bar, anchor):
            raise AnchorNotInGraph("anchor not in the epigraphical feasible set")
    else:
        if not pareto.on_pareto_front(problem, b_bar, anchor):
            raise AnchorNotOnFront("anchor image is not on the Pareto front")

    used = 0
    for b, ip in _graph_samples(problem, b_bar, config):
        used += 1
        lhs = dot(y, vsub(b, b_bar))
        if kind == "F":
            rhs = dot(weight, vsub(ip.witness, anchor))
        else:
            rhs = dot(weight, vsub(ip.p, anchor))
        if lhs > rhs:
            witness = (b, ip.witness if kind == "F" else ip.p)
            return CheckOutcome(False, witness, used, 0)
    return CheckOutcome(True, None, used, 0)


def convexity_check(problem: Problem, config: SampleConfig,
                    membership=None) -> CheckOutcome:
    """Sampled midpoint convexity of the epigraphical Pareto front graph.

    A pool of graph points is drawn first (front points through random
    strictly positive scalarizations); each sample then picks two pool
    points, adds independent nonnegative image shifts, and asserts
    membership of a random rational convex combination exactly.
    ``membership`` is injectable for harness self-tests and defaults to the
    feasibility-program oracle.
    """
    member = membership if membership is not None else pareto.in_epi_pareto
    bound = config.denominator_bound
    b_bar = problem.nominal
    r = Q(config.radius)
    sampler = _front_sampler(problem)

    pool = []
    pool_target = max(8, min(48, config.samples))
    attempts = 0
    skipped = 0
    while len(pool) < pool_target and attempts < 20 * pool_target + 100:
        rng = config.stream(1_000_000 + attempts)
        attempts += 1
        b = _perturb(rng, b_bar, config.radius, bound)
        ip = sampler(rng, b, bound)
        if ip is None:
            skipped += 1
            continue
        pool.append((b, ip.p))
    if not pool:
        return CheckOutcome(True, None, 0, skipped)

    used = 0
    for i in range(config.samples):
        rng = config.stream(i)
        b1, q1 = pool[rng.randrange(len(pool))]
        b2, q2 = pool[rng.randrange(len(pool))]
        p1 = tuple(v + r * _rand_unit(rng, bound) for v in q1)
        p2 = tuple(v + r * _rand_unit(rng, bound) for v in q2)
        lam = _rand_unit(rng, bound)
        b_mid = tuple((Q1 - lam) * u + lam * v for u, v in zip(b1, b2))
        p_mid = tuple((Q1 - lam) * u + lam * v for u, v in zip(p1, p2))
        used += 1
        try:
            inside = member(problem, b_mid, p_mid)
        except NotInDomS:
            inside = False
        if not inside:
            return CheckOutcome(False, (b1, p1, b2, p2, lam), used, skipped)
    return CheckOutcome(True, None, used, skipped)
