"""Exact angle arithmetic: rational multiples of pi, and tan/cot in Q(sqrt(3)).

Angles that occur in the congruence conditions and in the catalog tables are
rational multiples of pi with reduced denominator in {1, 2, 3, 4, 6, 12}; for
exactly those denominators tan and cot take values in the quadratic field
Q(sqrt(3)) (or are poles).  Everything else degrades to floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_TOL = 1e-9

#: reduced denominators q for which tan(p/q * pi) is exact in Q(sqrt(3))
EXACT_DENOMINATORS = frozenset({1, 2, 3, 4, 6, 12})


class Infinite:
    """Pole of tan (at pi/2 mod pi) or cot (at 0 mod pi); a singleton."""

    _instance = None

    def __new__(cls) -> "Infinite":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"


INF = Infinite()


@dataclass(frozen=True)
class Surd:
    """Element a + b*sqrt(3) of Q(sqrt(3)), components exact Fractions."""

    a: Fraction
    b: Fraction

    def __init__(self, a: Union[int, Fraction] = 0, b: Union[int, Fraction] = 0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __add__(self, other: "Surd | int | Fraction") -> "Surd":
        other = _as_surd(other)
        if other is NotImplemented:
            return NotImplemented
        return Surd(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "Surd | int | Fraction") -> "Surd":
        other = _as_surd(other)
        if other is NotImplemented:
            return NotImplemented
        return Surd(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: "Surd | int | Fraction") -> "Surd":
        return (-self) + other

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b)

    def __mul__(self, other: "Surd | int | Fraction") -> "Surd":
        other = _as_surd(other)
        if other is NotImplemented:
            return NotImplemented
        # (a + b r)(c + d r) with r^2 = 3
        return Surd(
            self.a * other.a + 3 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        """Multiplicative inverse via the conjugate; exact."""
        n = self.a * self.a - 3 * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("zero or degenerate surd")
        return Surd(self.a / n, -self.b / n)

    def __truediv__(self, other: "Surd | int | Fraction") -> "Surd":
        other = _as_surd(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(3.0)

    def __repr__(self) -> str:
        return f"Surd({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*sqrt(3)"

    def to_json(self) -> dict:
        return {"a": [self.a.numerator, self.a.denominator],
                "b": [self.b.numerator, self.b.denominator],
                "sqrt": 3}


def _as_surd(x):
    if isinstance(x, Surd):
        return x
    if isinstance(x, (int, Fraction)):
        return Surd(x, 0)
    return NotImplemented


#: a tan/cot value: exact surd, pole, or plain float
ExactValue = Union[Surd, Infinite, float]


class Angle:
    """An angle: exact rational multiple of pi, or a numeric value in radians.

    Sums and integer/rational scalings of exact angles stay exact; any
    operation mixing in a numeric angle degrades to numeric.
    """

    __slots__ = ("_pi", "_rad")

    def __init__(self, pi: Fraction | None = None, radians: float | None = None):
        if (pi is None) == (radians is None):
            raise ValueError("give exactly one of pi=, radians=")
        self._pi = Fraction(pi) if pi is not None else None
        self._rad = float(radians) if radians is not None else None

    @classmethod
    def of_pi(cls, p: int | Fraction, q: int = 1) -> "Angle":
        """Exact angle (p/q)*pi."""
        return cls(pi=Fraction(p, q) if q != 1 else Fraction(p))

    @classmethod
    def from_radians(cls, x: float) -> "Angle":
        return cls(radians=x)

    @property
    def is_exact(self) -> bool:
        return self._pi is not None

    @property
    def pi_fraction(self) -> Fraction:
        if self._pi is None:
            raise ValueError("not an exact angle")
        return self._pi

    @property
    def radians(self) -> float:
        if self._pi is not None:
            return float(self._pi) * math.pi
        return self._rad

    def __add__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        if self._pi is not None and other._pi is not None:
            return Angle(pi=self._pi + other._pi)
        return Angle(radians=self.radians + other.radians)

    def __neg__(self) -> "Angle":
        if self._pi is not None:
            return Angle(pi=-self._pi)
        return Angle(radians=-self._rad)

    def __sub__(self, other: "Angle") -> "Angle":
        if not isinstance(other, Angle):
            return NotImplemented
        return self + (-other)

    def scaled(self, k: int | Fraction) -> "Angle":
        if self._pi is not None:
            return Angle(pi=self._pi * k)
        return Angle(radians=self._rad * float(k))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Angle):
            return NotImplemented
        if self._pi is not None and other._pi is not None:
            return self._pi == other._pi
        if self._pi is None and other._pi is None:
            return self._rad == other._rad
        return False

    def __hash__(self) -> int:
        return hash((self._pi, self._rad))

    def approx_eq(self, other: "Angle", tol: float = DEFAULT_TOL) -> bool:
        return abs(self.radians - other.radians) <= tol

    def __repr__(self) -> str:
        return f"Angle({format_angle(self)!r})"

    def to_json(self) -> dict:
        if self._pi is not None:
            return {"pi_rational": [self._pi.numerator, self._pi.denominator]}
        return {"radians": self._rad}


ZERO_ANGLE = Angle.of_pi(0)


def angle_from_json(obj: dict) -> Angle:
    if "pi_rational" in obj:
        p, q = obj["pi_rational"]
        return Angle.of_pi(int(p), int(q))
    if "radians" in obj:
        return Angle.from_radians(float(obj["radians"]))
    raise ValueError(f"not an angle object: {obj!r}")


def reduce_mod_pi(a: Angle) -> Angle:
    """Unique representative of a modulo pi in [0, pi); exact stays exact."""
    if a.is_exact:
        return Angle(pi=a.pi_fraction % 1)
    r = math.fmod(a.radians, math.pi)
    if r < 0:
        r += math.pi
    return Angle(radians=r)


# tan(k*pi/12) for k = 0..11; INF at the pole k=6.
_TAN_TWELFTHS: dict[int, ExactValue] = {
    0: Surd(0, 0),
    1: Surd(2, -1),                  # 2 - sqrt(3)
    2: Surd(0, Fraction(1, 3)),      # sqrt(3)/3
    3: Surd(1, 0),
    4: Surd(0, 1),                   # sqrt(3)
    5: Surd(2, 1),                   # 2 + sqrt(3)
    6: INF,
    7: Surd(-2, -1),
    8: Surd(0, -1),
    9: Surd(-1, 0),
    10: Surd(0, Fraction(-1, 3)),
    11: Surd(-2, 1),
}


def tan_exact(a: Angle) -> ExactValue:
    """tan(a): exact in Q(sqrt(3)) for denominators 1,2,3,4,6,12, else float."""
    if a.is_exact:
        f = a.pi_fraction % 1
        if f.denominator in EXACT_DENOMINATORS:
            k = (f.numerator * (12 // f.denominator)) % 12
            return _TAN_TWELFTHS[k]
        return math.tan(float(f) * math.pi)
    return math.tan(a.radians)


def cot_exact(a: Angle) -> ExactValue:
    """cot(a) with the same exactness contract as tan_exact; INF at 0 mod pi."""
    if a.is_exact:
        # cot(x) = tan(pi/2 - x) keeps the twelfth-of-pi table exact.
        return tan_exact(Angle(pi=Fraction(1, 2) - a.pi_fraction))
    s = math.sin(a.radians)
    c = math.cos(a.radians)
    if s == 0.0:
        return INF
    return c / s


def value_of(v: ExactValue) -> float:
    if isinstance(v, Infinite):
        raise ValueError("infinite value")
    return float(v)


def format_angle(a: Angle) -> str:
    """Render exact angles in the "p/q*pi" family ("pi/3", "-pi/6", "2/3*pi")."""
    if not a.is_exact:
        return f"{a.radians:.12g}"
    f = a.pi_fraction
    if f == 0:
        return "0"
    p, q = f.numerator, f.denominator
    sign = "-" if p < 0 else ""
    p = abs(p)
    if q == 1:
        return f"{sign}pi" if p == 1 else f"{sign}{p}*pi"
    if p == 1:
        return f"{sign}pi/{q}"
    return f"{sign}{p}/{q}*pi"


_PI_FORMS = [
    re.compile(r"^(?P<s>[+-])?pi$"),
    re.compile(r"^(?P<s>[+-])?pi\s*/\s*(?P<q>\d+)$"),
    re.compile(r"^(?P<s>[+-])?(?P<p>\d+)\s*\*?\s*pi$"),
    re.compile(r"^(?P<s>[+-])?(?P<p>\d+)\s*/\s*(?P<q>\d+)\s*\*\s*pi$"),
    re.compile(r"^(?P<s>[+-])?(?P<p>\d+)\s*\*?\s*pi\s*/\s*(?P<q>\d+)$"),
]

_ATAN_FORM = re.compile(r"^(?P<s>[+-])?atan\((?P<arg>.+)\)$")


def _parse_sqrt_expr(s: str) -> float:
    """Numeric value of surd-ish expressions: sqrt(5), 1/sqrt(13), sqrt(7/3), sqrt(5)/3."""
    s = s.strip()
    m = re.match(r"^sqrt\((?P<r>[^)]+)\)$", s)
    if m:
        return math.sqrt(_parse_sqrt_expr(m.group("r")))
    m = re.match(r"^(?P<num>.+?)\s*/\s*sqrt\((?P<r>[^)]+)\)$", s)
    if m:
        return _parse_sqrt_expr(m.group("num")) / math.sqrt(_parse_sqrt_expr(m.group("r")))
    m = re.match(r"^sqrt\((?P<r>[^)]+)\)\s*/\s*(?P<den>[0-9.]+)$", s)
    if m:
        return math.sqrt(_parse_sqrt_expr(m.group("r"))) / float(m.group("den"))
    m = re.match(r"^(?P<p>\d+)\s*/\s*(?P<q>\d+)$", s)
    if m:
        return int(m.group("p")) / int(m.group("q"))
    return float(s)


def parse_angle(s: str) -> Angle:
    """Parse "pi/3", "-pi/6", "2/3*pi", "0.25", "atan(sqrt(5))" (atan is numeric-only)."""
    s = s.strip().lower()
    for pat in _PI_FORMS:
        m = pat.match(s)
        if m:
            d = m.groupdict()
            p = int(d.get("p") or 1)
            q = int(d.get("q") or 1)
            if d.get("s") == "-":
                p = -p
            return Angle.of_pi(p, q)
    m = _ATAN_FORM.match(s)
    if m:
        v = math.atan(_parse_sqrt_expr(m.group("arg")))
        return Angle.from_radians(-v if m.group("s") == "-" else v)
    try:
        x = float(s)
    except ValueError:
        raise ValueError(f"cannot parse angle: {s!r}") from None
    if x == 0.0:
        return Angle.of_pi(0)
    return Angle.from_radians(x)


def snap_to_rational_pi(x_radians: float, max_den: int = 12,
                        tol: float = DEFAULT_TOL) -> Fraction | None:
    """Smallest-denominator p/q (q <= max_den) with |x - (p/q)pi| <= tol, or None.

    Distinct fractions with denominators <= 12 are at least pi/132 apart, so
    for tolerances far below that the snap target is unambiguous.
    """
    u = x_radians / math.pi
    for q in range(1, max_den + 1):
        p = round(u * q)
        if abs(u - Fraction(p, q)) * math.pi <= tol:
            return Fraction(p, q)
    return None
