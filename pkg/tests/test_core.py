import math
import random

import pytest

from paretolip.core import (AffineForm, NormSpec, Problem, Row, SymbolicSystem,
                            dual_norm_value, norm_value, parse_problem,
                            problem_to_text)
from paretolip.errors import (DimensionMismatch, MalformedSyntax,
                              ZeroObjective)
from paretolip.rational import ExactSqrt, Q, parse_rational, qstr

from support import load_example, rand_q


class TestParsing:
    def test_example_6_1_parses_exactly(self, example61):
        p = example61
        assert (p.n, p.q, p.m) == (2, 1, 4)
        assert p.objectives == ((Q(2), Q(1)),)
        assert p.rows == ((Q(-1), Q(-1)), (Q(-1), Q(2)), (Q(-2), Q(0)),
                          (Q(3), Q(1)))
        assert p.nominal == (Q(-2), Q(1), Q(-2), Q(7))
        assert p.decision_norm.kind == "euclidean"

    def test_zero_objective_count_rejected(self):
        text = "n 1\nq 0\nrow 1 <= b1\nnominal 0\n"
        with pytest.raises(ZeroObjective):
            parse_problem(text)

    def test_zero_objective_vector_rejected(self):
        text = "n 1\nq 1\nobjective 0\nrow 1 <= b1\nnominal 0\n"
        with pytest.raises(ZeroObjective):
            parse_problem(text)

    def test_fraction_round_trip(self):
        text = "n 1\nq 1\nobjective 1/3\nrow 1 <= b1\nnominal -5/3\n"
        p = parse_problem(text)
        assert p.objectives[0][0] == Q(1, 3)
        assert qstr(p.objectives[0][0]) == "1/3"
        assert p.nominal[0] == Q(-5, 3)

    def test_problem_text_round_trip(self, example61):
        assert parse_problem(problem_to_text(example61)) == example61

    def test_malformed_rhs_index(self):
        text = "n 1\nq 1\nobjective 1\nrow 1 <= b7\nnominal 0\n"
        with pytest.raises(MalformedSyntax):
            parse_problem(text)

    def test_dimension_mismatch(self):
        text = "n 2\nq 1\nobjective 1,1\nrow 1 <= b1\nnominal 0\n"
        with pytest.raises(DimensionMismatch):
            parse_problem(text)

    def test_decimal_literals_parse_exactly(self):
        assert parse_rational("0.1") == Q(1, 10)
        assert parse_rational("-2.25") == Q(-9, 4)

    def test_rational_text_round_trip_randomized(self):
        rng = random.Random(71)
        for _ in range(300):
            value = Q(rng.randint(-10**9, 10**9), rng.randint(1, 10**6))
            assert parse_rational(qstr(value)) == value


class TestNorms:
    def test_dual_is_involution(self):
        for kind in ("euclidean", "l1", "linf"):
            spec = NormSpec(kind, "decision")
            assert spec.dual().dual() == spec

    def test_linf_example(self):
        assert norm_value(NormSpec("linf"), (Q(-2), Q(1), Q(-2), Q(7))) == \
            ExactSqrt.of(7)

    def test_l1_paper_vertex(self):
        # the vertex whose l1-norm realizes the Example 6.1 modulus
        v = (Q(-5, 3), Q(-1, 3), Q(0), Q(0))
        assert norm_value(NormSpec("l1"), v) == ExactSqrt.of(2)

    def test_euclidean_square_and_float(self):
        value = norm_value(NormSpec("euclidean"), (Q(2), Q(1)))
        assert value.squared == Q(5)
        assert abs(float(value) - math.sqrt(5)) < 1e-15

    def test_dual_norm_value_uses_duality_table(self):
        v = (Q(3), Q(-1))
        assert dual_norm_value(NormSpec("l1"), v) == ExactSqrt.of(3)      # linf
        assert dual_norm_value(NormSpec("linf"), v) == ExactSqrt.of(4)   # l1


class TestAffineForm:
    def test_linear_combination_commutes(self):
        rng = random.Random(5)
        for _ in range(100):
            m = rng.randint(1, 4)
            f = AffineForm.of([rand_q(rng) for _ in range(m)], rand_q(rng))
            g = AffineForm.of([rand_q(rng) for _ in range(m)], rand_q(rng))
            alpha, beta = rand_q(rng), rand_q(rng)
            b = tuple(rand_q(rng) for _ in range(m))
            combo = f.combine(alpha, g, beta)
            assert combo.evaluate(b) == alpha * f.evaluate(b) + beta * g.evaluate(b)

    def test_unit_form(self):
        form = AffineForm.unit(3, 1)
        assert form.evaluate((Q(5), Q(-7), Q(1))) == Q(-7)


class TestSymbolicSystem:
    def test_rows_normalize_canonically(self):
        row = Row.of((Q(-7), Q(14)), AffineForm.of((Q(0), Q(7)), Q(0)))
        assert row.lhs == (Q(-1), Q(2))
        assert row.rhs.coeffs == (Q(0), Q(1))

    def test_consistency_rows_split_off(self):
        sys = SymbolicSystem.from_rows(2, 1, [
            ((Q(1), Q(0)), AffineForm.of((Q(1),))),
            ((Q(0), Q(0)), AffineForm.of((Q(5),))),
        ])
        assert len(sys.rows) == 1
        assert len(sys.consistency_rows) == 1

    def test_instantiate_and_contains(self, example61):
        sys = example61.system()
        b = example61.nominal
        assert sys.contains(b, (Q(1), Q(1)))
        assert not sys.contains(b, (Q(0), Q(0)))

    def test_exactness_of_scalar_data(self):
        p = Problem.of([(Q(1, 3), Q(2))], [(Q(1), Q(0))], (Q(1),))
        assert p.scalarize((Q(3),)) == (Q(1), Q(6))
