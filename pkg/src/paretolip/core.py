"""Problem model: norms, affine-parametric inequality systems, parsing.

A problem is the inequality system ``<a_t, x> <= b_t`` (t = 1..m) together
with objective vectors c_1..c_q, a nominal parameter vector and the norm
choices for the decision and image spaces.  The parameter space always
carries the supremum norm (dual: l1); that pairing is hard-wired because the
modulus formulas downstream depend on it.

``SymbolicSystem`` is the workhorse for the elimination calculus: a list of
inequalities whose right-hand sides are affine forms in the parameter
vector b.  Rows whose left-hand side vanishes constrain only the parameter
("consistency rows"); they are kept separately and never silently dropped,
since they encode the domain of the epigraphical mappings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, MalformedSyntax, ZeroObjective
from .rational import (ExactSqrt, Q, Q0, Rat, Vec, dot, is_zero, parse_rational,
                       primitive_scale, qstr, vecstr, zeros)

NORM_KINDS = ("euclidean", "l1", "linf")
_DUAL = {"euclidean": "euclidean", "l1": "linf", "linf": "l1"}


@dataclass(frozen=True)
class NormSpec:
    """A norm on a named space.  The parameter space is always linf/l1."""

    kind: str
    space: str = "decision"

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")

    def dual(self) -> "NormSpec":
        return NormSpec(_DUAL[self.kind], self.space)


PARAMETER_NORM = NormSpec("linf", "parameter")


def norm_value(spec: NormSpec, v: Vec) -> ExactSqrt:
    """Exact norm of ``v``: rational for l1/linf, ``sqrt`` carrier for
    euclidean (the square stays rational; floats appear only on display)."""
    if spec.kind == "l1":
        return ExactSqrt.of(sum((abs(x) for x in v), Q0))
    if spec.kind == "linf":
        return ExactSqrt.of(max((abs(x) for x in v), default=Q0))
    return ExactSqrt.sqrt_of(sum((x * x for x in v), Q0))


def dual_norm_value(spec: NormSpec, v: Vec) -> ExactSqrt:
    return norm_value(spec.dual(), v)


@dataclass(frozen=True)
class AffineForm:
    """b |-> <coeffs, b> + constant, exact in every operation."""

    coeffs: Vec
    constant: Rat = Q0

    @staticmethod
    def of(coeffs, constant=0) -> "AffineForm":
        return AffineForm(tuple(Q(c) for c in coeffs), Q(constant))

    @staticmethod
    def unit(m: int, t: int) -> "AffineForm":
        """The form b |-> b_t (0-based index t) on an m-dimensional b."""
        return AffineForm(tuple(Q(1) if j == t else Q0 for j in range(m)), Q0)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def evaluate(self, b: Vec) -> Rat:
        return dot(self.coeffs, b) + self.constant

    def scale(self, factor) -> "AffineForm":
        f = Q(factor)
        return AffineForm(tuple(f * c for c in self.coeffs), f * self.constant)

    def plus(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                          self.constant + other.constant)

    def combine(self, alpha, other: "AffineForm", beta) -> "AffineForm":
        return self.scale(alpha).plus(other.scale(beta))

    def __str__(self) -> str:
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append((c, f"b{j + 1}"))
        if self.constant:
            terms.append((self.constant, ""))
        if not terms:
            return "0"
        parts = []
        for i, (c, sym) in enumerate(terms):
            mag = abs(c)
            body = sym if (mag == 1 and sym) else (qstr(mag) + ("*" + sym if sym else ""))
            if i == 0:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)


@dataclass(frozen=True)
class Row:
    """One inequality ``<lhs, x> <= rhs(b)``, stored canonically scaled.

    The canonical form divides through by gcd(numerators)/lcm(denominators)
    of all coefficients, so scalar multiples compare equal (the positive
    scale cannot flip the inequality).
    """

    lhs: Vec
    rhs: AffineForm

    @staticmethod
    def of(lhs, rhs: AffineForm) -> "Row":
        lhs = tuple(Q(x) for x in lhs)
        flat = lhs + rhs.coeffs + (rhs.constant,)
        scaled = primitive_scale(flat)
        n = len(lhs)
        m = rhs.dim
        return Row(scaled[:n], AffineForm(scaled[n:n + m], scaled[n + m]))

    @property
    def is_consistency(self) -> bool:
        return is_zero(self.lhs)

    def holds_at(self, b: Vec, x: Vec) -> bool:
        return dot(self.lhs, x) <= self.rhs.evaluate(b)

    def __str__(self) -> str:
        lhs = vecstr(self.lhs)
        return f"{lhs} <= {self.rhs}"


@dataclass(frozen=True)
class SymbolicSystem:
    """Inequality system in x with parameter-affine right-hand sides."""

    n: int
    m: int
    rows: tuple
    consistency_rows: tuple

    @staticmethod
    def from_rows(n: int, m: int, rows) -> "SymbolicSystem":
        regular = []
        consistency = []
        for row in rows:
            if not isinstance(row, Row):
                row = Row.of(row[0], row[1])
            if len(row.lhs) != n or row.rhs.dim != m:
                raise DimensionMismatch(
                    f"row of shape ({len(row.lhs)}, {row.rhs.dim}) in ({n}, {m}) system")
            (consistency if row.is_consistency else regular).append(row)
        return SymbolicSystem(n, m, tuple(regular), tuple(consistency))

    def all_rows(self) -> tuple:
        return self.rows + self.consistency_rows

    @property
    def is_whole_space(self) -> bool:
        return not self.rows and not self.consistency_rows

    def instantiate(self, b: Vec):
        """Concrete inequalities at b: ([(lhs, rhs_value)], [consistency values])."""
        ineqs = [(row.lhs, row.rhs.evaluate(b)) for row in self.rows]
        cvals = [row.rhs.evaluate(b) for row in self.consistency_rows]
        return ineqs, cvals

    def contains(self, b: Vec, x: Vec) -> bool:
        if any(row.rhs.evaluate(b) < 0 for row in self.consistency_rows):
            return False
        return all(row.holds_at(b, x) for row in self.rows)

    def format_lines(self) -> list[str]:
        lines = [f"row {row}" for row in self.rows]
        lines += [f"consistency 0 <= {row.rhs}" for row in self.consistency_rows]
        return lines


@dataclass(frozen=True)
class Problem:
    """An RHS-perturbed linear multiobjective program at desk scale."""

    n: int
    q: int
    objectives: tuple
    rows: tuple
    nominal: Vec
    decision_norm: NormSpec
    image_norm: NormSpec

    def __post_init__(self):
        if self.n < 1 or self.q < 1 or self.m < 1:
            raise DimensionMismatch("need n >= 1, q >= 1, m >= 1")
        if len(self.objectives) != self.q:
            raise DimensionMismatch("objective count != q")
        for c in self.objectives:
            if len(c) != self.n:
                raise DimensionMismatch("objective vector of wrong dimension")
            if is_zero(c):
                raise ZeroObjective("zero objective vector")
        for a in self.rows:
            if len(a) != self.n:
                raise DimensionMismatch("constraint row of wrong dimension")
        if len(self.nominal) != self.m:
            raise DimensionMismatch("nominal parameter of wrong dimension")

    @property
    def m(self) -> int:
        return len(self.rows)

    @staticmethod
    def of(objectives, rows, nominal, decision_norm="euclidean",
           image_norm="euclidean") -> "Problem":
        objectives = tuple(tuple(Q(x) for x in c) for c in objectives)
        rows = tuple(tuple(Q(x) for x in a) for a in rows)
        nominal = tuple(Q(x) for x in nominal)
        n = len(rows[0]) if rows else (len(objectives[0]) if objectives else 0)
        return Problem(n, len(objectives), objectives, rows, nominal,
                       NormSpec(decision_norm, "decision"),
                       NormSpec(image_norm, "image"))

    def system(self) -> SymbolicSystem:
        rows = [Row.of(a, AffineForm.unit(self.m, t)) for t, a in enumerate(self.rows)]
        return SymbolicSystem.from_rows(self.n, self.m, rows)

    def image(self, x: Vec) -> Vec:
        return tuple(dot(c, x) for c in self.objectives)

    def scalarize(self, weights: Vec) -> Vec:
        if len(weights) != self.q:
            raise DimensionMismatch("weight vector of wrong dimension")
        combo = list(zeros(self.n))
        for w, c in zip(weights, self.objectives):
            if w:
                for j, cj in enumerate(c):
                    combo[j] += w * cj
        return tuple(combo)

    def feasible(self, b: Vec, x: Vec) -> bool:
        return all(dot(a, x) <= bt for a, bt in zip(self.rows, b))


def parse_problem(text: str) -> Problem:
    """Parse the line-oriented problem file format.

    Keys: ``n``, ``q``, ``objective`` (q times), ``row <vec> <= b<t>``
    (m times, t ascending from 1), ``nominal``, optional
    ``decision_norm``/``image_norm`` (default euclidean).  Rationals are
    "p/q" strings and survive a round-trip bit-exactly.
    """
    n = None
    q = None
    objectives = []
    rows = []
    nominal = None
    norms = {"decision_norm": "euclidean", "image_norm": "euclidean"}

    def fail(lineno, msg):
        raise MalformedSyntax(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "n":
                n = int(rest)
            elif key == "q":
                q = int(rest)
            elif key == "objective":
                objectives.append(tuple(parse_rational(p) for p in rest.split(",")))
            elif key == "row":
                body, sep, rhs = rest.partition("<=")
                if not sep:
                    fail(lineno, "row without '<='")
                rhs = rhs.strip()
                if rhs != f"b{len(rows) + 1}":
                    fail(lineno, f"expected RHS b{len(rows) + 1}, got {rhs!r}")
                rows.append(tuple(parse_rational(p) for p in body.strip().split(",")))
            elif key == "nominal":
                nominal = tuple(parse_rational(p) for p in rest.split(","))
            elif key in norms:
                if rest not in NORM_KINDS:
                    fail(lineno, f"unknown norm {rest!r}")
                norms[key] = rest
            else:
                fail(lineno, f"unknown key {key!r}")
        except MalformedSyntax:
            raise
        except (ValueError, TypeError) as exc:
            fail(lineno, str(exc))

    if q is not None and q < 1:
        raise ZeroObjective(f"q = {q}")
    if n is None or q is None or nominal is None or not rows or not objectives:
        raise MalformedSyntax("missing one of: n, q, objective, row, nominal")
    if len(objectives) != q:
        raise DimensionMismatch(f"{len(objectives)} objective lines for q = {q}")
    if any(len(c) != n for c in objectives) or any(len(a) != n for a in rows):
        raise DimensionMismatch("vector of wrong dimension for n")
    if len(nominal) != len(rows):
        raise DimensionMismatch("nominal dimension != number of rows")
    return Problem(n, q, tuple(objectives), tuple(rows), nominal,
                   NormSpec(norms["decision_norm"], "decision"),
                   NormSpec(norms["image_norm"], "image"))


def problem_to_text(problem: Problem) -> str:
    """Inverse of ``parse_problem`` up to comments and blank lines."""
    lines = [f"n {problem.n}", f"q {problem.q}"]
    for c in problem.objectives:
        lines.append(f"objective {vecstr(c)}")
    for t, a in enumerate(problem.rows, start=1):
        lines.append(f"row {vecstr(a)} <= b{t}")
    lines.append(f"nominal {vecstr(problem.nominal)}")
    lines.append(f"decision_norm {problem.decision_norm.kind}")
    lines.append(f"image_norm {problem.image_norm.kind}")
    return "\n".join(lines) + "\n"
