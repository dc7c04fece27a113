"""
Exact bivariate polynomial arithmetic over the rationals.

Coefficients are ``fractions.Fraction`` (arbitrary precision, always in lowest
terms); there is no floating point anywhere. Polynomials are sparse maps
Monomial -> Fraction in the two variables x and y, graded by a WeightSystem of
positive rational weights. The textual grammar (see ``parse_polynomial``) is the
one the CLI accepts in problem files.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Literal, Union

from curvefrob.errors import NegativePowerError, ParseError, ZeroPolynomialError

Rational = Fraction
Variable = Literal["x", "y"]
Scalar = Union[int, Fraction]


def to_rational(value: int | str | Fraction) -> Fraction:
    """Parse an int, a Fraction or a string like "3/2", "-1", "7" into a Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def rational_text(value: Fraction | int) -> str:
    """Wire format for rationals: "p/q", or "n" for integers."""
    return str(Fraction(value))


# ---- Monomials and weights ----
@dataclass(frozen=True, order=True, slots=True)
class Monomial:
    """x^exp_x * y^exp_y."""

    exp_x: int
    exp_y: int

    def __post_init__(self) -> None:
        if self.exp_x < 0 or self.exp_y < 0:
            raise ValueError(f"negative exponent in monomial ({self.exp_x}, {self.exp_y})")

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self.exp_x + other.exp_x, self.exp_y + other.exp_y)

    def divides(self, other: Monomial) -> bool:
        return self.exp_x <= other.exp_x and self.exp_y <= other.exp_y

    def quotient(self, divisor: Monomial) -> Monomial:
        """self / divisor; caller guarantees divisibility."""
        return Monomial(self.exp_x - divisor.exp_x, self.exp_y - divisor.exp_y)

    def lcm(self, other: Monomial) -> Monomial:
        return Monomial(max(self.exp_x, other.exp_x), max(self.exp_y, other.exp_y))

    def coprime(self, other: Monomial) -> bool:
        return min(self.exp_x, other.exp_x) == 0 and min(self.exp_y, other.exp_y) == 0

    def is_one(self) -> bool:
        return self.exp_x == 0 and self.exp_y == 0

    def to_text(self) -> str:
        parts = []
        for name, exp in (("x", self.exp_x), ("y", self.exp_y)):
            if exp == 1:
                parts.append(name)
            elif exp > 1:
                parts.append(f"{name}^{exp}")
        return "*".join(parts) if parts else "1"


ONE = Monomial(0, 0)


@dataclass(frozen=True, slots=True)
class WeightSystem:
    """Positive rational weights of x and y; p_total is the sum of both."""

    p_x: Fraction
    p_y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p_x", to_rational(self.p_x))
        object.__setattr__(self, "p_y", to_rational(self.p_y))
        if self.p_x <= 0 or self.p_y <= 0:
            raise ValueError(f"weights must be strictly positive, got ({self.p_x}, {self.p_y})")

    @property
    def p_total(self) -> Fraction:
        return self.p_x + self.p_y

    def degree(self, m: Monomial) -> Fraction:
        return m.exp_x * self.p_x + m.exp_y * self.p_y

    def scaled(self, factor: Fraction) -> WeightSystem:
        return WeightSystem(self.p_x * factor, self.p_y * factor)


STANDARD_WEIGHTS = WeightSystem(Fraction(1), Fraction(1))


class Homogeneity(Enum):
    NON_HOMOGENEOUS = "non-homogeneous"


NON_HOMOGENEOUS = Homogeneity.NON_HOMOGENEOUS


# ---- Polynomials ----
class Poly:
    """Immutable sparse polynomial in x, y with Fraction coefficients; no stored zeros."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None) -> None:
        clean: dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            c = Fraction(coeff)
            if c:
                clean[mono] = c
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, terms: dict[Monomial, Fraction]) -> Poly:
        # terms already zero-free and Fraction-valued
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls) -> Poly:
        return cls._trusted({})

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        return cls({ONE: c})

    @classmethod
    def one(cls) -> Poly:
        return cls.constant(1)

    @classmethod
    def monomial(cls, exp_x: int, exp_y: int, coeff: Scalar = 1) -> Poly:
        return cls({Monomial(exp_x, exp_y): coeff})

    @classmethod
    def var(cls, name: Variable) -> Poly:
        if name == "x":
            return cls.monomial(1, 0)
        if name == "y":
            return cls.monomial(0, 1)
        raise ValueError(f"unknown variable {name!r}; only x and y are supported")

    # -- read access --
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, m: Monomial) -> Fraction:
        return self._terms.get(m, Fraction(0))

    def monomials(self) -> list[Monomial]:
        return list(self._terms)

    def constant_term(self) -> Fraction:
        return self.coefficient(ONE)

    # -- ring operations --
    def __add__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._trusted(out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._trusted({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> Poly:
        return Poly.constant(other) - self

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._trusted(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> Poly:
        c = Fraction(c)
        if not c:
            return Poly.zero()
        return Poly._trusted({m: v * c for m, v in self._terms.items()})

    def mul_term(self, m: Monomial, c: Fraction) -> Poly:
        """self * (c * m), the inner step of every reduction."""
        if not c:
            return Poly.zero()
        return Poly._trusted({mm * m: v * c for mm, v in self._terms.items()})

    def power(self, n: int) -> Poly:
        if n < 0:
            raise NegativePowerError(f"cannot raise a polynomial to the negative power {n}")
        result = Poly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __pow__(self, n: int) -> Poly:
        return self.power(n)

    def diff(self, var: Variable) -> Poly:
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            if var == "x" and m.exp_x:
                out[Monomial(m.exp_x - 1, m.exp_y)] = c * m.exp_x
            elif var == "y" and m.exp_y:
                out[Monomial(m.exp_x, m.exp_y - 1)] = c * m.exp_y
        return Poly._trusted(out)

    # -- comparison --
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- printing --
    def sorted_terms(self, weights: WeightSystem | None = None) -> list[tuple[Monomial, Fraction]]:
        """Canonical order: descending weighted degree, ties by descending exp_x."""
        w = weights or STANDARD_WEIGHTS
        return sorted(self._terms.items(), key=lambda mc: (w.degree(mc[0]), mc[0].exp_x), reverse=True)

    def to_text(self, weights: WeightSystem | None = None) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for i, (m, c) in enumerate(self.sorted_terms(weights)):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if m.is_one():
                body = rational_text(mag)
            elif mag == 1:
                body = m.to_text()
            else:
                body = f"{rational_text(mag)}*{m.to_text()}"
            if i == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.to_text()!r})"


# ---- grading ----
def weighted_degree(p: Poly, w: WeightSystem) -> Fraction | Homogeneity:
    """Common weighted degree of all terms, or NON_HOMOGENEOUS."""
    if p.is_zero:
        raise ZeroPolynomialError("the weighted degree of the zero polynomial is undefined")
    degrees = {w.degree(m) for m in p.monomials()}
    if len(degrees) == 1:
        return degrees.pop()
    return NON_HOMOGENEOUS


def is_homogeneous(p: Poly, w: WeightSystem) -> bool:
    return p.is_zero or weighted_degree(p, w) is not NON_HOMOGENEOUS


def homogeneous_components(p: Poly, w: WeightSystem) -> dict[Fraction, Poly]:
    parts: dict[Fraction, dict[Monomial, Fraction]] = {}
    for m, c in p:
        parts.setdefault(w.degree(m), {})[m] = c
    return {d: Poly._trusted(t) for d, t in sorted(parts.items())}


# ---- calculus ----
def partial_derivative(p: Poly, var: Variable) -> Poly:
    return p.diff(var)


def jacobian_det(a: Poly, b: Poly) -> Poly:
    """d(a)/dx * d(b)/dy - d(a)/dy * d(b)/dx."""
    return a.diff("x") * b.diff("y") - a.diff("y") * b.diff("x")


# ---- ring operations as functions ----
def add(a: Poly, b: Poly) -> Poly:
    return a + b


def subtract(a: Poly, b: Poly) -> Poly:
    return a - b


def multiply(a: Poly, b: Poly) -> Poly:
    return a * b


def scalar_multiply(c: Scalar, p: Poly) -> Poly:
    return p.scale(c)


def power(p: Poly, n: int) -> Poly:
    return p.power(n)


# ---- parser ----
# expr   := [('+'|'-')] term (('+'|'-') term)*
# term   := factor ('*' factor)*
# factor := base ('^' uint)?
# base   := uint | uint '/' uint | 'x' | 'y' | '(' expr ')'
# uint   := ASCII digits only
DIGITS = frozenset("0123456789")


class _PolyParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> ParseError:
        at = self.pos if pos is None else pos
        return ParseError(message, offset=len(self.text[:at].encode("utf-8")))

    def skip_whitespace(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_whitespace()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Poly:
        result = self.parse_expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return result

    def parse_expr(self) -> Poly:
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        result = self.parse_term().scale(sign)
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            term = self.parse_term()
            result = result + term if op == "+" else result - term
        return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Poly:
        base = self.parse_base()
        if self.peek() == "^":
            self.pos += 1
            if self.peek() == "-":
                raise self.error("negative exponent")
            start = self.pos
            exponent = self.parse_uint("exponent")
            if self.pos < len(self.text) and self.text[self.pos] == ".":
                raise self.error("non-integer exponent", start)
            return base.power(exponent)
        return base

    def parse_base(self) -> Poly:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input, expected a number, x, y or '('")
        if ch in DIGITS:
            start = self.pos
            num = self.parse_uint("number")
            if self.pos < len(self.text) and self.text[self.pos] == ".":
                raise self.error("decimal numbers are not allowed; write a fraction", start)
            if self.peek() == "/":
                self.pos += 1
                den_pos = self.pos
                den = self.parse_uint("denominator")
                if den == 0:
                    raise self.error("zero denominator", den_pos)
                return Poly.constant(Fraction(num, den))
            return Poly.constant(num)
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in ("x", "y"):
                raise self.error(f"unknown variable {name!r}; only x and y are allowed", start)
            return Poly.var(name)  # type: ignore[arg-type]
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        raise self.error(f"unexpected {ch!r}, expected a number, x, y or '('")

    def parse_uint(self, what: str) -> int:
        self.skip_whitespace()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in DIGITS:
            self.pos += 1
        if start == self.pos:
            raise self.error(f"expected {what}")
        return int(self.text[start:self.pos])


def parse_polynomial(text: str) -> Poly:
    """Parse the problem-file polynomial grammar into a canonical Poly."""
    return _PolyParser(text).parse()
