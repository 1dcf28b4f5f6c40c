import math
import random

import pytest

from paretolip import lp, pareto, sensitivity
from paretolip.core import Problem
from paretolip.errors import (AnchorNotOnFront, LipPUnsupported,
                              NotDualConsistent, OnDomainBoundary,
                              SingleObjectiveRequired)
from paretolip.rational import ExactSqrt, Q, Q0, dot

from support import rand_vec, random_problem

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)


class TestWeightGrid:
    def test_simplex_grid_q2(self):
        grid = sensitivity.simplex_grid(2, 4)
        assert len(grid) == 5
        assert all(sum(alpha) == 1 for alpha in grid)

    def test_simplex_grid_q3_count(self):
        grid = sensitivity.simplex_grid(3, 6)
        assert len(grid) == 28  # C(6 + 2, 2)

    def test_composite_mode_skips_cancelling_weights(self):
        problem = Problem.of([(Q(1),), (Q(-1),)], [(Q(1),)], (Q(0),))
        grid = sensitivity.WeightGrid.build(problem,
                                            sensitivity.COMPOSITE_NORMALIZED, 2)
        assert grid.skipped_degenerate == 1
        assert all(any(p.composite) for p in grid.points)

    def test_normalization_factors_exact(self, example51):
        grid = sensitivity.WeightGrid.build(example51,
                                            sensitivity.COMPOSITE_NORMALIZED, 4)
        for point in grid.points:
            assert point.scale.squared == sum(
                (x * x for x in point.composite), Q0)


class TestSubdiffF:
    def test_example_6_1_exact(self, example61):
        sub = sensitivity.subdiff_F(example61, example61.nominal, (Q(1), Q(1)))
        assert sub.exactness == sensitivity.EXACT
        pieces = sub.active_pieces()
        assert len(pieces) == 1
        piece = pieces[0]
        assert piece.scale.squared == Q(5)  # ||c||_* = sqrt(5)
        vertices = sorted(sv.vector for sv in piece.subgradient_vertices())
        assert vertices == [(Q(-5, 3), Q(-1, 3), Q0, Q0),
                            (Q(-1), Q0, Q(-1, 2), Q0)]

    def test_example_5_1_unit_circle_identity(self, example51):
        grid = sensitivity.WeightGrid.build(example51,
                                            sensitivity.COMPOSITE_NORMALIZED, 64)
        sub = sensitivity.subdiff_F(example51, (Q0, Q0), (Q0, Q0), grid)
        samples = sub.sample_subgradients()
        assert len(samples) == 65
        for _, sv in samples:
            assert sum((x * x for x in sv.vector), Q0) == sv.scale.squared
            assert all(x <= 0 for x in sv.vector)

    def test_interior_anchor_gives_empty_union(self, example61):
        # 2 x1 + x2 = 15 > 3: inside the epigraphical set, above the value
        sub = sensitivity.subdiff_F(example61, example61.nominal, (Q(5), Q(5)))
        assert sub.active_pieces() == ()
        report = sensitivity.lip_modulus(example61, "ef",
                                         anchor=(Q(5), Q(5)))
        assert report.finite and report.value == ExactSqrt.of(0)


class TestSubdiffP:
    def test_example_6_1_exact_vertices(self, example61):
        sub = sensitivity.subdiff_P(example61, example61.nominal, (Q(3),))
        pieces = sub.active_pieces()
        assert len(pieces) == 1
        vertices = sorted(sv.vector for sv in pieces[0].subgradient_vertices())
        assert vertices == [(Q(-5, 3), Q(-1, 3), Q0, Q0),
                            (Q(-1), Q0, Q(-1, 2), Q0)]
        assert pieces[0].scale == ExactSqrt.of(1)

    def test_example_5_1_quarter_ellipse_identity(self, example51):
        grid = sensitivity.WeightGrid.build(example51,
                                            sensitivity.IMAGE_NORMALIZED, 64)
        sub = sensitivity.subdiff_P(example51, (Q0, Q0), (Q0, Q0), grid)
        for _, sv in sub.sample_subgradients():
            v = sv.vector
            assert v[0] * v[0] * Q(1, 4) + v[1] * v[1] == sv.scale.squared

    def test_example_5_2_boundary_weight(self, example52):
        grid = sensitivity.WeightGrid.build(example52,
                                            sensitivity.IMAGE_NORMALIZED, 1)
        sub = sensitivity.subdiff_P(example52, (Q0, Q0), (Q0, Q0), grid)
        by_weight = {p.weight: p for p in sub.pieces}
        # weight (1, 0): dual face {(1, 0)}, subgradient (-1, 0)
        piece = by_weight[(Q(1), Q0)]
        assert piece.active
        assert [sv.vector for sv in piece.subgradient_vertices()] == \
            [(Q(-1), Q0)]
        # weight (0, 1): the scalarization is unbounded, the piece is empty
        assert not by_weight[(Q0, Q(1))].active

    def test_anchor_off_front_rejected(self, example52):
        with pytest.raises(AnchorNotOnFront):
            sensitivity.subdiff_P(example52, (Q0, Q0), (Q(1), Q0))


class TestLipModulus:
    def test_example_6_1_all_targets(self, example61):
        ep = sensitivity.lip_modulus(example61, "ep")
        assert ep.exactness == sensitivity.EXACT
        assert ep.value == ExactSqrt.of(2)
        assert ep.attaining_subgradient.vector == (Q(-5, 3), Q(-1, 3), Q0, Q0)
        p = sensitivity.lip_modulus(example61, "p")
        assert p.value == ExactSqrt.of(2)
        ef = sensitivity.lip_modulus(example61, "ef")
        assert ef.value.squared == Q(4, 5)

    def test_example_5_2_exact_ones(self, example52):
        grid_f = sensitivity.WeightGrid.build(example52,
                                              sensitivity.COMPOSITE_NORMALIZED, 200)
        grid_p = sensitivity.WeightGrid.build(example52,
                                              sensitivity.IMAGE_NORMALIZED, 200)
        ef = sensitivity.lip_modulus(example52, "ef", grid=grid_f)
        ep = sensitivity.lip_modulus(example52, "ep", grid=grid_p)
        assert ef.value == ExactSqrt.of(1)
        assert ep.value == ExactSqrt.of(1)

    def test_lip_p_rejected_for_q2(self, example52):
        with pytest.raises(LipPUnsupported):
            sensitivity.lip_modulus(example52, "p")

    def test_monotone_in_resolution(self, example51):
        values = []
        for k in (5, 10, 20, 40):
            grid = sensitivity.WeightGrid.build(example51,
                                                sensitivity.IMAGE_NORMALIZED, k)
            values.append(sensitivity.lip_modulus(example51, "ep",
                                                  grid=grid).value.squared)
        assert values == sorted(values)
        assert all(v <= Q(5) for v in values)


class TestValueFunction:
    def test_example_6_1_pieces(self, example61):
        vf = sensitivity.lp_value_function(example61)
        assert len(vf.pieces) == 4
        gradients = {p.coeffs for p in vf.pieces}
        assert (Q(-5, 3), Q(-1, 3), Q0, Q0) in gradients
        assert (Q(-1), Q0, Q(-1, 2), Q0) in gradients
        assert (Q(-5, 3), Q0, Q(-7, 6), Q(-2, 3)) in gradients
        assert (Q(-7, 4), Q0, Q(-5, 4), Q(-3, 4)) in gradients
        assert len(vf.domain_conditions) == 2
        assert vf.value(example61.nominal) == Q(3)
        values = [p.evaluate(example61.nominal) for p in vf.pieces]
        assert sorted(values) == [Q(3, 4), Q(1), Q(3), Q(3)]

    def test_single_row_trivial(self):
        problem = Problem.of([(Q(-1),)], [(Q(1),)], (Q(2),))
        vf = sensitivity.lp_value_function(problem)
        assert len(vf.pieces) == 1
        assert vf.pieces[0].coeffs == (Q(-1),)
        assert vf.value((Q(2),)) == Q(-2)

    def test_requires_single_objective(self, example51):
        with pytest.raises(SingleObjectiveRequired):
            sensitivity.lp_value_function(example51)

    def test_requires_dual_consistency(self):
        problem = Problem.of([(Q(0), Q(1))], [(Q(1), Q(0))], (Q(0),))
        with pytest.raises(NotDualConsistent):
            sensitivity.lp_value_function(problem)

    def test_matches_solver_on_random_instances(self):
        rng = random.Random(73)
        instances = 0
        while instances < 12:
            problem = random_problem(rng, q_choices=(1,), n_max=2, m_max=4)
            if not lp.dual_consistent(problem.rows, problem.objectives[0]):
                continue
            instances += 1
            vf = sensitivity.lp_value_function(problem)
            for _ in range(25):
                x0 = rand_vec(rng, problem.n, -2, 2)
                b = tuple(dot(a, x0) + Q(rng.randint(0, 8), 4)
                          for a in problem.rows)
                out = lp.solve(problem.rows, b, problem.objectives[0])
                assert out.status == lp.OPTIMAL
                assert vf.value(b) == out.value


class TestSubdiffPLp:
    def test_example_6_1(self, example61):
        sub = sensitivity.subdiff_P_lp(example61)
        vertices = sorted(sv.vector for sv in
                          sub.pieces[0].subgradient_vertices())
        assert vertices == [(Q(-5, 3), Q(-1, 3), Q0, Q0),
                            (Q(-1), Q0, Q(-1, 2), Q0)]
        assert sub.exactness == sensitivity.EXACT

    def test_unique_active_piece_singleton(self):
        problem = Problem.of([(Q(-1),)], [(Q(1),)], (Q(2),))
        sub = sensitivity.subdiff_P_lp(problem)
        assert [sv.vector for sv in sub.pieces[0].subgradient_vertices()] == \
            [(Q(-1),)]

    def test_domain_boundary_rejected(self):
        # 0 <= b1 + b2 active at the nominal parameter
        problem = Problem.of([(Q(1),)], [(Q(-1),), (Q(1),)], (Q(1), Q(-1)))
        with pytest.raises(OnDomainBoundary):
            sensitivity.subdiff_P_lp(problem)

    def test_agrees_with_dual_face_randomized(self):
        # subdiff_P_lp cross-checks the max formula against the negated dual
        # face internally and raises on any disagreement
        rng = random.Random(79)
        instances = 0
        while instances < 10:
            problem = random_problem(rng, q_choices=(1,), n_max=2, m_max=4)
            if not lp.dual_consistent(problem.rows, problem.objectives[0]):
                continue
            vf = sensitivity.lp_value_function(problem)
            if not vf.strictly_inside(problem.nominal):
                continue
            instances += 1
            sub = sensitivity.subdiff_P_lp(problem)
            assert sub.pieces[0].subgradient_vertices()

    def test_consistent_with_grid_route(self, example61):
        exact = sensitivity.subdiff_P_lp(example61)
        grid = sensitivity.subdiff_P(example61, example61.nominal, (Q(3),))
        a = sorted(sv.vector for sv in exact.pieces[0].subgradient_vertices())
        b = sorted(sv.vector for sv in
                   grid.active_pieces()[0].subgradient_vertices())
        assert a == b


class TestLpRelations:
    def test_example_6_1(self, example61):
        rel = sensitivity.lp_relations(example61)
        assert rel.lip_p == ExactSqrt.of(2)
        assert rel.lip_ep == ExactSqrt.of(2)
        assert rel.lip_ef.squared == Q(4, 5)
        assert rel.norm_c_dual.squared == Q(5)
        assert rel.proportionality_ok

    def test_objective_scaling_homogeneity(self, example61):
        scaled = Problem.of([(Q(6), Q(3))], example61.rows, example61.nominal)
        rel = sensitivity.lp_relations(example61)
        rel3 = sensitivity.lp_relations(scaled)
        assert rel3.lip_p == rel.lip_p.scale(3)
        assert rel3.lip_ef == rel.lip_ef
        assert rel3.proportionality_ok

    def test_identity_on_random_instances(self):
        rng = random.Random(83)
        instances = 0
        while instances < 10:
            problem = random_problem(rng, q_choices=(1,), n_max=2, m_max=4)
            if not lp.dual_consistent(problem.rows, problem.objectives[0]):
                continue
            vf = sensitivity.lp_value_function(problem)
            if not vf.strictly_inside(problem.nominal):
                continue
            instances += 1
            rel = sensitivity.lp_relations(problem)
            assert rel.proportionality_ok
            assert rel.lip_p == rel.lip_ep
            assert rel.lip_ef == rel.lip_ep.divide_by(rel.norm_c_dual)
