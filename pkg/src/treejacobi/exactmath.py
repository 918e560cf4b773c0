"""Exact rational, Gaussian-rational and polynomial arithmetic.

Scalars are `fractions.Fraction` (canonical form is the stdlib's job) and
complex scalars are :class:`GaussianRational`, a pair of Fractions.  A
polynomial is a tuple of Fraction coefficients, lowest degree first, with
no trailing zeros; the zero polynomial has an empty tuple.  Everything in
this module is exact: there is no floating point anywhere, and every
decision (root counting, interlacing, sign) is made through Sturm chains
and rational comparisons.

Text formats:

* rational        ``"p/q"`` with optional sign on ``p``; plain ``"p"`` is
  accepted on input and means ``p/1``.
* Gaussian        ``"a/b+c/di"``, e.g. ``"0/1+1/1i"`` for the imaginary unit.
* polynomial      coefficient list lowest degree first,
  e.g. ``"[-2/1, 0/1, 1/1]"`` for ``z^2 - 2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivisionError, ParseError

Rational = Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_GAUSSIAN_RE = re.compile(
    r"^(?P<re>[+-]?\d+(?:/\d+)?)?(?:(?P<im>[+-]?\d+(?:/\d+)?)i)?$"
)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` (or plain ``"p"``) into a Fraction."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ParseError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    """Canonical ``"p/q"`` form, denominator always explicit."""
    return f"{x.numerator}/{x.denominator}"


def parse_gaussian(text: str) -> "GaussianRational":
    """Parse ``"a/b+c/di"`` (either part may be absent, not both)."""
    m = _GAUSSIAN_RE.match(text.strip().replace(" ", ""))
    if not m or (m.group("re") is None and m.group("im") is None):
        raise ParseError(f"not a Gaussian rational literal: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(m.group("im")) if m.group("im") else Fraction(0)
    return GaussianRational(re_part, im_part)


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __post_init__(self):
        if type(self.re) is not Fraction:
            object.__setattr__(self, "re", Fraction(self.re))
        if type(self.im) is not Fraction:
            object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return GaussianRational(Fraction(value), Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) + (-self)

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        return GaussianRational.of(other) / self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational.of(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|w|^2 as an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        sign = "+" if self.im >= 0 else "-"
        return f"{format_rational(self.re)}{sign}{format_rational(abs(self.im))}i"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


I = GaussianRational(Fraction(0), Fraction(1))


class Poly:
    """Univariate polynomial over the rationals, coefficients lowest first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def linear(a, b) -> "Poly":
        """The polynomial a + b*z."""
        return Poly([Fraction(a), Fraction(b)])

    # -- structure ----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self) -> "Poly":
        lc = self.leading()
        if lc == 1:
            return self
        return Poly([c / lc for c in self.coeffs])

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "Poly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.leading()
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            f = c / lc
            quot[i - db] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - db + j] -= f * oc
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; DivisionError on nonzero remainder."""
        q, r = divmod(self, other)
        if not r.is_zero:
            raise DivisionError(
                f"inexact polynomial division: remainder degree {r.degree}"
            )
        return q

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs) if i > 0])

    def __call__(self, x):
        """Evaluate by Horner's rule; works for Fraction and GaussianRational."""
        acc = Fraction(0) if not isinstance(x, GaussianRational) else GaussianRational(
            Fraction(0), Fraction(0)
        )
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)!r})"


X = Poly([0, 1])
ONE = Poly([1])


def format_poly(p: Poly) -> str:
    return "[" + ", ".join(format_rational(c) for c in p.coeffs) + "]"


def parse_poly(text: str) -> Poly:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"not a polynomial literal: {text!r}")
    body = text[1:-1].strip()
    if not body:
        return Poly()
    return Poly([parse_rational(part) for part in body.split(",")])


# ---------------------------------------------------------------------
# gcd / lcm
# ---------------------------------------------------------------------


def _integer_coeffs(p: Poly) -> list[int]:
    """A positive scalar multiple of p with coprime integer coefficients."""
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def _strip_content(r: list[int]) -> list[int]:
    g = 0
    for v in r:
        g = math.gcd(g, v)
    return [v // g for v in r] if g > 1 else r


def _signed_prem(a: list[int], b: list[int]) -> tuple[list[int], int]:
    """Integer pseudo-remainder: returns (r, s) with m*a = q*b + r over the
    integers for some m = lc(b)^t, and s = sign(m).  Coefficient growth
    stays polynomial, unlike fraction-field Euclid."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = 0
    while True:
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        head = r[-1]
        off = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, bc in enumerate(b):
            r[off + i] -= head * bc
        steps += 1
    sign = 1 if lb > 0 or steps % 2 == 0 else -1
    return r, sign


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor, via a primitive integer remainder
    sequence (exact; scalars never matter for the gcd)."""
    if a.is_zero or b.is_zero:
        raise ValueError("gcd of a zero polynomial is undefined here")
    if a.coeffs == b.coeffs:
        return a.monic()
    ai, bi = _integer_coeffs(a), _integer_coeffs(b)
    if len(ai) < len(bi):
        ai, bi = bi, ai
    while bi:
        r, _ = _signed_prem(ai, bi)
        ai, bi = bi, _strip_content(r)
    return Poly(ai).monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    """Monic least common multiple, satisfying gcd*lcm = monic(a*b)."""
    g = poly_gcd(a, b)
    return (a.monic() * b.monic()).exact_div(g)


def poly_gcd_lcm(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    g = poly_gcd(a, b)
    return g, (a.monic() * b.monic()).exact_div(g)


def poly_lcm_many(polys: Sequence[Poly]) -> Poly:
    acc = polys[0].monic()
    for p in polys[1:]:
        acc = poly_lcm(acc, p)
    return acc


# ---------------------------------------------------------------------
# Sturm chains and root counting
# ---------------------------------------------------------------------


def sturm_chain(p: Poly) -> list[Poly]:
    """A generalized Sturm chain for p: each member is a positive scalar
    multiple of the classical chain entry, computed over the integers with
    content stripping so coefficients stay manageable at high degree.
    Sign-variation counts are identical to the classical chain's."""
    if p.degree < 1:
        return [p]
    first = _integer_coeffs(p)
    second = _integer_coeffs(p.derivative())
    chain = [first, second]
    while len(chain[-1]) - 1 >= 1:
        r, sign = _signed_prem(chain[-2], chain[-1])
        if not r:
            break
        if sign > 0:
            r = [-v for v in r]
        chain.append(_strip_content(r))
    return [Poly(c) for c in chain]


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_changes(signs: Iterable[int]) -> int:
    changes = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            changes += 1
        prev = s
    return changes


def _variations_at(chain: Sequence[Poly], x: Fraction) -> int:
    return _sign_changes(_sign(q(x)) for q in chain)


def _variations_at_inf(chain: Sequence[Poly], positive: bool) -> int:
    if positive:
        return _sign_changes(_sign(q.leading()) for q in chain if not q.is_zero)
    return _sign_changes(
        _sign(q.leading()) * (-1) ** q.degree for q in chain if not q.is_zero
    )


def count_real_roots(p: Poly, lo: Fraction | None = None, hi: Fraction | None = None,
                     chain: Sequence[Poly] | None = None) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi].

    `None` endpoints mean -/+ infinity.  The left endpoint must not be a
    root of p; the right endpoint may be.
    """
    if p.is_zero:
        raise ValueError("root counting needs a nonzero polynomial")
    if p.degree == 0:
        return 0
    if chain is None:
        chain = sturm_chain(p)
    if lo is not None and p(lo) == 0:
        raise ValueError("left endpoint must not be a root")
    va = _variations_at(chain, lo) if lo is not None else _variations_at_inf(chain, False)
    vb = _variations_at(chain, hi) if hi is not None else _variations_at_inf(chain, True)
    return va - vb


def cauchy_root_bound(p: Poly) -> Fraction:
    """A rational B with every real root of p strictly inside (-B, B)."""
    lc = abs(p.leading())
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return Fraction(1) + m / lc


# ---------------------------------------------------------------------
# square-free decomposition (Yun's algorithm, characteristic zero)
# ---------------------------------------------------------------------


def square_free_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Monic pairwise-coprime factors g_i with p ~ prod g_i^i (scalars dropped)."""
    if p.is_zero:
        raise ValueError("zero polynomial has no square-free decomposition")
    p = p.monic()
    if p.degree == 0:
        return []
    dp = p.derivative()
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p, 1)]
    out = []
    w = p.exact_div(g)
    y = dp.exact_div(g)
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        gi = w.monic() if z.is_zero else poly_gcd(w, z)
        if gi.degree > 0:
            out.append((gi, i))
        w = w.exact_div(gi)
        y = Poly() if z.is_zero else z.exact_div(gi)
        i += 1
    return out


def is_square_free(p: Poly) -> bool:
    if p.degree <= 0:
        return not p.is_zero
    return poly_gcd(p, p.derivative()).degree == 0


# ---------------------------------------------------------------------
# real-root isolation
# ---------------------------------------------------------------------


@dataclass(frozen=True)
class RootInterval:
    """One distinct real root inside (lo, hi], or exactly at lo == hi."""

    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def width(self) -> Fraction:
        return self.hi - self.lo

    def as_strings(self) -> dict:
        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "multiplicity": self.multiplicity,
        }


@dataclass(frozen=True)
class RootSet:
    """All real roots of a polynomial, as disjoint isolating intervals."""

    roots: tuple[RootInterval, ...]

    def count(self) -> int:
        return len(self.roots)

    def count_with_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots)

    def as_strings(self) -> list[dict]:
        return [r.as_strings() for r in self.roots]


def _isolate_square_free(g: Poly, chain: Sequence[Poly]) -> list[tuple[Fraction, Fraction]]:
    """Disjoint half-open intervals (a, b], one distinct root of g in each."""
    if g.degree == 0:
        return []
    bound = cauchy_root_bound(g)
    out: list[tuple[Fraction, Fraction]] = []
    total = count_real_roots(g, -bound, bound, chain=chain)
    stack = [(-bound, bound, total)]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            out.append((a, b))
            continue
        m = _non_root_split(g, a, b)
        left = count_real_roots(g, a, m, chain=chain)
        stack.append((a, m, left))
        stack.append((m, b, cnt - left))
    out.sort()
    return out


def _non_root_split(g: Poly, a: Fraction, b: Fraction) -> Fraction:
    # midpoint, nudged toward a until it is not a root of g
    k = 2
    while True:
        m = a + (b - a) / k
        if g(m) != 0:
            return m
        k += 1


def _refine_interval(g: Poly, chain, a: Fraction, b: Fraction,
                     width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink (a, b] (holding one root of g) to width <= `width`."""
    while b - a > width:
        m = a + (b - a) / 2
        if g(m) == 0:
            return m, m
        if count_real_roots(g, a, m, chain=chain) == 1:
            b = m
        else:
            a = m
    return a, b


def isolate_real_roots(p: Poly, width: Fraction | None = None) -> RootSet:
    """Isolate every distinct real root of p with its multiplicity.

    Roots of different square-free factors are refined until all isolating
    intervals are pairwise disjoint.  `width` additionally refines every
    interval below the given size (display quality only; no decision in
    this package depends on it).
    """
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    factored = square_free_decomposition(p)
    tagged: list[tuple[Fraction, Fraction, int, Poly, Sequence[Poly]]] = []
    for g, mult in factored:
        chain = sturm_chain(g)
        for a, b in _isolate_square_free(g, chain):
            tagged.append((a, b, mult, g, chain))
    # disjointness across factors (roots themselves are pairwise distinct)
    changed = True
    while changed:
        changed = False
        tagged.sort(key=lambda t: (t[0], t[1]))
        for i in range(len(tagged) - 1):
            a1, b1, m1, g1, c1 = tagged[i]
            a2, b2, m2, g2, c2 = tagged[i + 1]
            if b1 > a2:  # overlap under the (lo, hi] reading
                h1 = (b1 - a1) / 2 if a1 != b1 else Fraction(0)
                h2 = (b2 - a2) / 2 if a2 != b2 else Fraction(0)
                if h1 > 0:
                    tagged[i] = (*_refine_interval(g1, c1, a1, b1, h1), m1, g1, c1)
                if h2 > 0:
                    tagged[i + 1] = (*_refine_interval(g2, c2, a2, b2, h2), m2, g2, c2)
                changed = True
    if width is not None:
        tagged = [
            (*_refine_interval(g, c, a, b, width), m, g, c)
            for a, b, m, g, c in tagged
        ]
        tagged.sort(key=lambda t: (t[0], t[1]))
    return RootSet(tuple(RootInterval(a, b, m) for a, b, m, _, _ in tagged))


def has_only_real_simple_roots(p: Poly) -> bool:
    """True iff p is nonconstant-or-constant nonzero, square-free with all roots real."""
    if p.is_zero:
        return False
    if p.degree == 0:
        return True
    if not is_square_free(p):
        return False
    return count_real_roots(p) == p.degree


def strict_interlace(p: Poly, q: Poly) -> bool:
    """Exact strict interlacing test for deg p = deg q + 1.

    True iff both polynomials have only real, simple roots, they share no
    root, and between consecutive roots of p lies exactly one root of q
    (equivalently the merged root sequence strictly alternates p q p ... p).
    Degenerate case: deg q = 0 requires only that p has one real root.
    """
    if p.is_zero or q.is_zero:
        return False
    if p.degree != q.degree + 1:
        return False
    if not has_only_real_simple_roots(p) or not has_only_real_simple_roots(q):
        return False
    if q.degree == 0:
        return True
    if poly_gcd(p, q).degree > 0:
        return False
    ip = [(a, b, "p", p, sturm_chain(p)) for a, b in
          _isolate_square_free(p, sturm_chain(p))]
    iq = [(a, b, "q", q, sturm_chain(q)) for a, b in
          _isolate_square_free(q, sturm_chain(q))]
    items = ip + iq
    changed = True
    while changed:
        changed = False
        items.sort(key=lambda t: (t[0], t[1]))
        for i in range(len(items) - 1):
            a1, b1, t1, g1, c1 = items[i]
            a2, b2, t2, g2, c2 = items[i + 1]
            if b1 > a2:
                if b1 != a1:
                    items[i] = (*_refine_interval(g1, c1, a1, b1, (b1 - a1) / 2), t1, g1, c1)
                if b2 != a2:
                    items[i + 1] = (*_refine_interval(g2, c2, a2, b2, (b2 - a2) / 2), t2, g2, c2)
                changed = True
    pattern = [t for _, _, t, _, _ in items]
    expected = ["p" if i % 2 == 0 else "q" for i in range(len(items))]
    return pattern == expected
