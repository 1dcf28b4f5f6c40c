"""Exact rational arithmetic substrate.

All scalar data in this package is an exact rational: gmpy2's ``mpq`` when
available (it is several times faster), otherwise the stdlib ``Fraction``.
Both types store a reduced numerator/positive-denominator pair and share
hashing and comparison semantics, so everything downstream is agnostic.

The module also provides the small pieces of exact linear algebra the
polyhedral code needs (solving dense systems, rank, affine projections) and
``ExactSqrt``, the carrier for values of the form ``a * sqrt(s)`` that show
up once Euclidean norms enter the picture.  Squares are kept exact; a float
is materialized only for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as Q

Rat = object  # annotation alias: gmpy2.mpq or fractions.Fraction
Vec = tuple

Q0 = Q(0)
Q1 = Q(1)


def parse_rational(text: str) -> Rat:
    """Parse ``p``, ``p/q`` or a plain decimal string into an exact rational.

    Decimals are converted exactly ("0.1" becomes 1/10); no float ever
    intervenes.  Raises ``ValueError`` on anything else.
    """
    token = text.strip()
    if not token:
        raise ValueError("empty rational literal")
    if "/" in token:
        num, _, den = token.partition("/")
        n = int(num.strip())
        d = int(den.strip())
        if d == 0:
            raise ValueError(f"zero denominator in {token!r}")
        return Q(n, d)
    if "." in token:
        sign = -1 if token.lstrip().startswith("-") else 1
        body = token.lstrip("+-")
        whole, _, frac = body.partition(".")
        whole_i = int(whole) if whole else 0
        if frac and not frac.isdigit():
            raise ValueError(f"bad decimal literal {token!r}")
        frac_i = int(frac) if frac else 0
        scale = 10 ** len(frac)
        return Q(sign * (whole_i * scale + frac_i), scale)
    return Q(int(token))


def qstr(x) -> str:
    """Canonical textual form: "p/q" when q > 1, otherwise "p"."""
    return str(Q(x))


def parse_vector(text: str) -> Vec:
    """Parse a comma-separated list of rationals into a tuple."""
    return tuple(parse_rational(part) for part in text.split(","))


def vecstr(v: Sequence) -> str:
    return ",".join(qstr(x) for x in v)


def dot(a: Sequence, b: Sequence) -> Rat:
    s = Q0
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def vadd(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def vneg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def zeros(n: int) -> Vec:
    return (Q0,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(Q1 if j == i else Q0 for j in range(n))


def is_zero(v: Sequence) -> bool:
    return all(not x for x in v)


def as_q_vector(v: Iterable) -> Vec:
    return tuple(Q(x) for x in v)


def primitive_scale(values: Sequence) -> Vec:
    """Scale by the unique positive rational making the entries a primitive
    integer vector (gcd of numerators over lcm of denominators divides out).

    Zero vectors are returned unchanged.
    """
    nums = []
    dens = []
    for x in values:
        if x:
            q = Q(x)
            nums.append(abs(int(q.numerator)))
            dens.append(int(q.denominator))
    if not nums:
        return tuple(Q(x) for x in values)
    g = 0
    for n in nums:
        g = math.gcd(g, n)
    l = 1
    for d in dens:
        l = l * d // math.gcd(l, d)
    factor = Q(l, g)
    return tuple(Q(x) * factor for x in values)


# ---------------------------------------------------------------------------
# dense exact linear algebra (desk scale)
# ---------------------------------------------------------------------------


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """Solve ``rows @ x = rhs`` exactly.

    Returns one solution (free variables set to 0) or None when the system
    is inconsistent.
    """
    m = len(rows)
    if m == 0:
        return ()
    n = len(rows[0])
    a = [list(row) + [r] for row, r in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n]:
            return None
    x = [Q0] * n
    for i, c in enumerate(pivots):
        x[c] = a[i][n]
    return tuple(x)


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, scanned in order."""
    picked: list[int] = []
    basis: list[list] = []
    for idx, row in enumerate(rows):
        vec = list(row)
        for b in basis:
            pc = next(i for i, x in enumerate(b) if x)
            if vec[pc]:
                f = vec[pc] / b[pc]
                vec = [x - f * y for x, y in zip(vec, b)]
        if any(vec):
            picked.append(idx)
            basis.append(vec)
    return picked


def rank(rows: Sequence[Sequence]) -> int:
    return len(independent_rows(rows))


def project_onto_affine(z: Sequence, rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """Euclidean projection of ``z`` onto ``{x | rows @ x = rhs}``, exact.

    Returns None when the affine set is empty.  The normal equations
    ``(M M^T) w = rhs - M z`` are solved over an independent row subset.
    """
    if not rows:
        return tuple(Q(x) for x in z)
    idx = independent_rows(rows)
    sub = [rows[i] for i in idx]
    subr = [rhs[i] for i in idx]
    # consistency of the dropped rows is checked against a solution
    gram = [[dot(r1, r2) for r2 in sub] for r1 in sub]
    target = [sr - dot(r, z) for r, sr in zip(sub, subr)]
    w = solve_linear(gram, target)
    if w is None:  # independent rows => Gram invertible; unreachable
        return None
    x = list(Q(v) for v in z)
    for wi, r in zip(w, sub):
        if wi:
            for j, rj in enumerate(r):
                if rj:
                    x[j] += wi * rj
    for r, sr in zip(rows, rhs):
        if dot(r, x) != sr:
            return None
    return tuple(x)


# ---------------------------------------------------------------------------
# exact nonnegative reals of the form a * sqrt(s)
# ---------------------------------------------------------------------------


def _perfect_square_root(q) -> Rat | None:
    """sqrt(q) when q is the square of a rational, else None."""
    num = int(Q(q).numerator)
    den = int(Q(q).denominator)
    if num < 0:
        return None
    rn = math.isqrt(num)
    rd = math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Q(rn, rd)
    return None


@dataclass(frozen=True)
class ExactSqrt:
    """A nonnegative value ``coeff * sqrt(radicand)`` with exact parts.

    Perfect squares are folded into the rational coefficient on
    construction, so purely rational values satisfy ``is_rational``.
    Comparisons go through the exact squares, never floats.
    """

    coeff: Rat
    radicand: Rat

    @staticmethod
    def of(coeff, radicand=1) -> "ExactSqrt":
        c = Q(coeff)
        s = Q(radicand)
        if not c or not s:
            if s < 0:
                raise ValueError("negative radicand")
            return ExactSqrt(Q0, Q1)
        if c < 0 or s < 0:
            raise ValueError("ExactSqrt requires a nonnegative value")
        root = _perfect_square_root(s)
        if root is not None:
            return ExactSqrt(c * root, Q1)
        return ExactSqrt(c, s)

    @staticmethod
    def sqrt_of(value) -> "ExactSqrt":
        return ExactSqrt.of(1, value)

    @property
    def squared(self) -> Rat:
        return self.coeff * self.coeff * self.radicand

    @property
    def is_rational(self) -> bool:
        return self.radicand == 1

    @property
    def rational(self) -> Rat | None:
        return self.coeff if self.radicand == 1 else None

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(float(self.radicand))

    def scale(self, factor) -> "ExactSqrt":
        return ExactSqrt.of(self.coeff * Q(factor), self.radicand)

    def divide_by(self, other: "ExactSqrt") -> "ExactSqrt":
        if not other.coeff:
            raise ZeroDivisionError("division by zero ExactSqrt")
        # a vs / (b vt) = (a/(b t)) * sqrt(s t)
        return ExactSqrt.of(self.coeff / (other.coeff * other.radicand),
                            self.radicand * other.radicand)

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactSqrt):
            return self.squared == other.squared
        return self.is_rational and self.coeff == Q(other)

    def __hash__(self):
        return hash((self.squared,))

    def __lt__(self, other: "ExactSqrt") -> bool:
        return self.squared < other.squared

    def __le__(self, other: "ExactSqrt") -> bool:
        return self.squared <= other.squared

    def __str__(self) -> str:
        if self.is_rational:
            return qstr(self.coeff)
        if self.coeff == 1:
            return f"sqrt({qstr(self.radicand)})"
        return f"{qstr(self.coeff)}*sqrt({qstr(self.radicand)})"
