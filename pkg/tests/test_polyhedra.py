import random

import pytest

from paretolip import polyhedra
from paretolip.core import AffineForm, Problem, SymbolicSystem
from paretolip.errors import ZeroDirection
from paretolip.rational import Q, Q0, dot

from support import rand_vec, random_problem, shifted_membership


def row_set(sys):
    return {(r.lhs, r.rhs.coeffs, r.rhs.constant) for r in sys.all_rows()}


class TestPolarGenerators:
    def test_halfspace_polar(self):
        gens = polyhedra.polar_generators([(Q(2), Q(1))])
        assert gens.rays == ((Q(2), Q(1)),)
        assert gens.lineality == ((Q(-1), Q(2)),)

    def test_orthant_is_self_polar(self):
        gens = polyhedra.polar_generators([(Q(1), Q0), (Q0, Q(1))])
        assert sorted(gens.rays) == [(Q0, Q(1)), (Q(1), Q0)]
        assert gens.lineality == ()

    def test_polar_of_line_is_orthogonal_line(self):
        gens = polyhedra.polar_generators([(Q(1), Q0), (Q(-1), Q0)])
        assert gens.rays == ()
        assert gens.lineality == ((Q0, Q(1)),)

    def test_double_polarity_randomized(self):
        rng = random.Random(9)
        for _ in range(25):
            n = rng.randint(1, 3)
            vectors = [rand_vec(rng, n) for _ in range(rng.randint(1, 4))]
            vectors = [v for v in vectors if any(v)] or [(Q(1),) * n]
            polar = polyhedra.polar_generators(vectors)
            double = polyhedra.polar_generators(polar.members(), dim=n)
            # cone(vectors) and the double polar contain the same samples
            for _ in range(10):
                coeffs = [Q(rng.randint(0, 5)) for _ in vectors]
                point = tuple(sum((c * v[j] for c, v in zip(coeffs, vectors)), Q0)
                              for j in range(n))
                assert double.contains(point)
            for v in double.rays:
                assert polyhedra.cone_contains(tuple(vectors), (), v)


class TestVertexEnumeration:
    def test_box_vertices(self):
        ineqs = [((Q(1), Q0), Q(1)), ((Q(-1), Q0), Q0),
                 ((Q0, Q(1)), Q(1)), ((Q0, Q(-1)), Q0)]
        vertices, rays, lineality = polyhedra.vertex_enumeration(2, ineqs)
        assert sorted(vertices) == [(Q0, Q0), (Q0, Q(1)), (Q(1), Q0),
                                    (Q(1), Q(1))]
        assert not rays and not lineality

    def test_unbounded_polyhedron_rays(self):
        ineqs = [((Q(-1), Q0), Q0), ((Q0, Q(-1)), Q0)]
        vertices, rays, lineality = polyhedra.vertex_enumeration(2, ineqs)
        assert vertices == ((Q0, Q0),)
        assert sorted(rays) == [(Q0, Q(1)), (Q(1), Q0)]
        assert not lineality


class TestConeElimination:
    def test_example_6_1_sigma_tilde(self, example61):
        sys = polyhedra.eliminate_cone_direction(example61.system(), (Q(2), Q(1)))
        part = polyhedra.partition_by_direction(example61.system(), (Q(2), Q(1)))
        assert part.t1 == (0, 1, 2) and part.t2 == (3,) and part.t0 == (1,)
        rows = sys.rows
        assert len(rows) == 6 and not sys.consistency_rows
        # kept rows then the pair combinations (paper order)
        assert rows[3].lhs == (Q(2), Q(-4))
        assert rows[3].rhs.coeffs == (Q(7), Q0, Q0, Q(3))
        # the (2, 4) combination is the canonical duplicate of row 2
        assert rows[4] == rows[1]
        assert rows[5].lhs == (Q(-2), Q(4))
        assert rows[5].rhs.coeffs == (Q0, Q0, Q(7), Q(4))

    def test_recessive_direction_is_identity(self, example51):
        sys = example51.system()
        out = polyhedra.eliminate_cone_direction(sys, (Q(1), Q0))
        assert row_set(out) == row_set(sys)

    def test_zero_direction_rejected(self, example51):
        with pytest.raises(ZeroDirection):
            polyhedra.eliminate_cone_direction(example51.system(), (Q0, Q0))

    def test_t1_empty_gives_whole_space(self):
        problem = Problem.of([(Q(1),)], [(Q(1),)], (Q(0),))
        out = polyhedra.eliminate_cone_direction(problem.system(), (Q(1),))
        assert out.is_whole_space

    def test_matches_shift_oracle_randomized(self):
        rng = random.Random(17)
        for _ in range(30):
            problem = random_problem(rng, q_choices=(1,), n_max=3, m_max=4,
                                     require_dom_s=False)
            u = rand_vec(rng, problem.n)
            if all(x == 0 for x in u):
                continue
            out = polyhedra.eliminate_cone_direction(problem.system(), u)
            for _ in range(20):
                b = rand_vec(rng, problem.m)
                x = rand_vec(rng, problem.n)
                expected = shifted_membership(problem.rows, b, x, u, signed=False)
                assert out.contains(b, x) == expected

    def test_idempotent_setwise(self):
        rng = random.Random(4)
        for _ in range(10):
            problem = random_problem(rng, q_choices=(1,), require_dom_s=False)
            u = rand_vec(rng, problem.n)
            if all(x == 0 for x in u):
                continue
            once = polyhedra.eliminate_cone_direction(problem.system(), u)
            twice = polyhedra.eliminate_cone_direction(once, u)
            for _ in range(12):
                b = rand_vec(rng, problem.m)
                x = rand_vec(rng, problem.n)
                assert once.contains(b, x) == twice.contains(b, x)


class TestSpanElimination:
    def test_example_6_1_sigma_tilde_tilde(self, example61):
        cone_step = polyhedra.eliminate_cone_direction(example61.system(),
                                                       (Q(2), Q(1)))
        reduced = polyhedra.remove_redundancy(cone_step)
        assert len(reduced.rows) == 5
        out = polyhedra.eliminate_span_direction(reduced, (Q(-1), Q(2)))
        assert len(out.rows) == 4 and len(out.consistency_rows) == 2
        lhs = [r.lhs for r in out.rows]
        assert (Q(-6), Q(-3)) in lhs  # -6 x1 - 3 x2 <= 5 b1 + b2
        row = out.rows[lhs.index((Q(-6), Q(-3)))]
        assert row.rhs.coeffs == (Q(5), Q(1), Q0, Q0)
        cons = {r.rhs.coeffs for r in out.consistency_rows}
        assert cons == {(Q(7), Q(2), Q0, Q(3)), (Q(1), Q0, Q(1), Q(1))}

    def test_orthogonal_direction_is_identity(self):
        problem = Problem.of([(Q(1), Q0)], [(Q(1), Q0)], (Q(0),))
        sys = problem.system()
        out = polyhedra.eliminate_span_direction(sys, (Q0, Q(1)))
        assert row_set(out) == row_set(sys)

    def test_matches_shift_oracle_randomized(self):
        rng = random.Random(23)
        for _ in range(30):
            problem = random_problem(rng, q_choices=(1,), n_max=3, m_max=4,
                                     require_dom_s=False)
            u = rand_vec(rng, problem.n)
            if all(x == 0 for x in u):
                continue
            out = polyhedra.eliminate_span_direction(problem.system(), u)
            for _ in range(20):
                b = rand_vec(rng, problem.m)
                x = rand_vec(rng, problem.n)
                expected = shifted_membership(problem.rows, b, x, u, signed=True)
                assert out.contains(b, x) == expected


class TestEpigraphSystem:
    def test_example_6_1_conditions(self, example61):
        sys = polyhedra.epigraph_system(example61)
        assert len(sys.rows) == 4
        cons = {r.rhs.coeffs for r in sys.consistency_rows}
        assert cons == {(Q(7), Q(2), Q0, Q(3)), (Q(1), Q0, Q(1), Q(1))}

    def test_example_5_1_identity(self, example51):
        assert row_set(polyhedra.epigraph_system(example51)) == \
            row_set(example51.system())

    def test_zero_polar_cone_identity(self):
        # objectives positively spanning the plane: the polar is {0}
        problem = Problem.of([(Q(1), Q0), (Q0, Q(1)), (Q(-1), Q(-1))],
                             [(Q(1), Q(1))], (Q(0),))
        gens = polyhedra.polar_generators(problem.objectives)
        assert gens.is_zero_cone
        assert row_set(polyhedra.epigraph_system(problem)) == \
            row_set(problem.system())

    def test_order_independence_setwise(self, example51):
        rng = random.Random(8)
        gens = polyhedra.polar_generators(example51.objectives)
        forward = polyhedra.epigraph_system(example51)
        backward = example51.system()
        for u in reversed(gens.rays):
            backward = polyhedra.eliminate_cone_direction(backward, u)
        for _ in range(20):
            b = rand_vec(rng, example51.m)
            x = rand_vec(rng, example51.n)
            assert forward.contains(b, x) == backward.contains(b, x)

    def test_oracle_on_random_multiobjective(self):
        rng = random.Random(31)
        for _ in range(8):
            problem = random_problem(rng, q_choices=(2,), n_max=2, m_max=3)
            sys = polyhedra.epigraph_system(problem)
            gens = polyhedra.polar_generators(problem.objectives)
            for _ in range(10):
                b = rand_vec(rng, problem.m)
                x = rand_vec(rng, problem.n)
                # oracle: x in F(b) + Theta via generator coefficients
                from paretolip import lp
                k = len(gens.rays) + len(gens.lineality)
                ineqs = list(zip(problem.rows, b))
                expected = None
                if k == 0:
                    expected = problem.feasible(b, x)
                else:
                    # x - sum mu_i g_i feasible with mu >= 0 on rays
                    total = problem.n + k
                    lifted = []
                    for a, bt in ineqs:
                        lifted.append((tuple(a) + (Q0,) * k, bt))
                    eqs = []
                    gens_all = list(gens.rays) + list(gens.lineality)
                    for j in range(problem.n):
                        row = [Q0] * total
                        row[j] = Q(1)
                        for i, g in enumerate(gens_all):
                            row[problem.n + i] = g[j]
                        eqs.append((tuple(row), x[j]))
                    mu_sign = []
                    for i in range(len(gens.rays)):
                        row = [Q0] * total
                        row[problem.n + i] = Q(-1)
                        mu_sign.append((tuple(row), Q0))
                    lifted2 = [(tuple(g) + (Q0,) * k, h) for g, h in ineqs]
                    res = lp.solve_lp([Q0] * total, lifted2 + mu_sign, eqs)
                    expected = res.is_optimal
                assert sys.contains(b, x) == expected


class TestRemoveRedundancy:
    def test_duplicate_dropped_keep_first(self, example61):
        sys = polyhedra.eliminate_cone_direction(example61.system(), (Q(2), Q(1)))
        detail = polyhedra.remove_redundancy_detailed(sys)
        assert len(detail.dropped_duplicate) == 1
        assert detail.dropped_duplicate[0].lhs == (Q(-1), Q(2))
        assert len(detail.system.rows) == 5
        assert not detail.dropped_global

    def test_dominated_for_all_b_dropped(self):
        sys = SymbolicSystem.from_rows(1, 1, [
            ((Q(1),), AffineForm.of((Q(1),), Q0)),
            ((Q(1),), AffineForm.of((Q(1),), Q(1))),
        ])
        out = polyhedra.remove_redundancy(sys)
        assert len(out.rows) == 1
        assert out.rows[0].rhs.constant == Q0

    def test_local_only_redundancy_flagged(self, example61):
        sys = polyhedra.eliminate_cone_direction(example61.system(), (Q(2), Q(1)))
        detail = polyhedra.remove_redundancy_detailed(sys, at=example61.nominal)
        local = {r.lhs for r in detail.dropped_local}
        # the (3, 4) combination is redundant at the nominal parameter only
        assert (Q(-2), Q(4)) in local
        assert all(r.lhs != (Q(2), Q(-4)) for r in detail.dropped_global)

    def test_consistency_rows_never_silently_dropped(self):
        sys = SymbolicSystem.from_rows(1, 2, [
            ((Q(1),), AffineForm.of((Q(1), Q0))),
            ((Q0,), AffineForm.of((Q0, Q(1)))),
        ])
        out = polyhedra.remove_redundancy(sys)
        assert len(out.consistency_rows) == 1
