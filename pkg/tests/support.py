"""Shared test machinery: paper-example loaders, seeded random instances,
and independent oracles (interval membership, brute-force domination scans,
zooming grid search) that never route through the code paths they check."""

from __future__ import annotations

import random
from pathlib import Path

from paretolip import parse_problem
from paretolip.core import Problem
from paretolip import lp, polyhedra
from paretolip.rational import Q, Q0, dot

PROBLEM_DIR = Path(__file__).resolve().parent.parent / "problems"


def load_example(name: str) -> Problem:
    return parse_problem((PROBLEM_DIR / f"{name}.prob").read_text())


def rand_q(rng: random.Random, lo: int = -4, hi: int = 4, den: int = 6):
    return Q(rng.randint(lo * den, hi * den), den)


def rand_vec(rng: random.Random, n: int, lo=-4, hi=4, den=6):
    return tuple(rand_q(rng, lo, hi, den) for _ in range(n))


def random_problem(rng: random.Random, q_choices=(1, 2), n_max=3, m_max=5,
                   require_dom_s=True) -> Problem:
    """A random desk-scale instance whose nominal parameter is feasible
    (built from a feasible point plus nonnegative slack) and, optionally,
    that has nondominated points."""
    while True:
        n = rng.randint(1, n_max)
        m = rng.randint(1, m_max)
        q = rng.choice(q_choices)
        rows = []
        for _ in range(m):
            row = rand_vec(rng, n)
            while all(x == 0 for x in row):
                row = rand_vec(rng, n)
            rows.append(row)
        objectives = []
        for _ in range(q):
            c = rand_vec(rng, n)
            while all(x == 0 for x in c):
                c = rand_vec(rng, n)
            objectives.append(c)
        x0 = rand_vec(rng, n, -2, 2)
        nominal = tuple(dot(a, x0) + Q(rng.randint(0, 12), 6) for a in rows)
        problem = Problem.of(objectives, rows, nominal)
        if not require_dom_s or lp.in_dom_s(problem, nominal):
            return problem


def random_feasible_point(problem: Problem, b, rng: random.Random):
    """A random feasible point: a convex mix of one feasible anchor with a
    random target, stepped exactly to stay inside.  None when F(b) = empty."""
    from paretolip.rational import zeros

    out = lp.solve_lp(zeros(problem.n), list(zip(problem.rows, b)))
    if not out.is_optimal:
        return None
    f = out.point
    x = rand_vec(rng, problem.n, -2, 2)
    t_hi = Q(1)
    for a, bt in zip(problem.rows, b):
        den = dot(a, x) - dot(a, f)
        if den > 0:
            t_hi = min(t_hi, (bt - dot(a, f)) / den)
    t = t_hi * Q(rng.randint(0, 4), 4)
    return tuple(fi + t * (xi - fi) for fi, xi in zip(f, x))


# ---------------------------------------------------------------------------
# interval oracle for single-direction sums (independent of the simplex)
# ---------------------------------------------------------------------------


def shifted_membership(rows, b, x, u, signed: bool) -> bool:
    """x in F(b) + cone{u} (signed=False) or F(b) + span{u} (signed=True),
    decided by intersecting the one-dimensional constraint intervals for
    the shift coefficient mu: pure interval arithmetic, no LP."""
    lo = None
    hi = None
    for a, bt in zip(rows, b):
        d = dot(a, u)
        gap = dot(a, x) - bt
        if d == 0:
            if gap > 0:
                return False
        elif d > 0:
            cand = gap / d
            lo = cand if lo is None or cand > lo else lo
        else:
            cand = gap / d
            hi = cand if hi is None or cand < hi else hi
    if not signed:
        lo = Q0 if lo is None or lo < 0 else lo
    if lo is None:
        return True
    if hi is None:
        return True
    return lo <= hi


# ---------------------------------------------------------------------------
# brute-force domination scan over generators
# ---------------------------------------------------------------------------


def brute_force_nondominated(problem: Problem, b, x0) -> bool:
    """Scan the generators of F(b) cut by C(y) <= C(x0): x0 is dominated
    iff some generator point has a different image or some recession ray
    moves the image."""
    image = problem.image(x0)
    ineqs = list(zip(problem.rows, b))
    ineqs += [(c, image[i]) for i, c in enumerate(problem.objectives)]
    points, rays, lineality = polyhedra.vertex_enumeration(problem.n, ineqs)
    for v in points:
        if problem.image(v) != image:
            return False
    zero = (Q0,) * problem.q
    for r in rays:
        if problem.image(r) != zero:
            return False
    for l in lineality:
        assert problem.image(l) == zero
    return True


# ---------------------------------------------------------------------------
# independent Euclidean projection oracle (external QP solver)
# ---------------------------------------------------------------------------


def qp_projection_distance(z, ineqs) -> float | None:
    """Euclidean distance from z to {x | g.x <= h} via an external convex
    QP solver; None when the solver reports infeasibility.  Entirely
    independent of the package's exact active-set enumeration."""
    import cvxpy as cp
    import numpy as np

    n = len(z)
    x = cp.Variable(n)
    g_mat = np.array([[float(v) for v in g] for g, _ in ineqs])
    h_vec = np.array([float(h) for _, h in ineqs])
    z_vec = np.array([float(v) for v in z])
    problem = cp.Problem(cp.Minimize(cp.sum_squares(x - z_vec)),
                         [g_mat @ x <= h_vec])
    problem.solve()
    if problem.status not in ("optimal", "optimal_inaccurate"):
        return None
    return float(problem.value) ** 0.5
