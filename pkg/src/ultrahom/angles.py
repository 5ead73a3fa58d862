"""Exact arithmetic on points e^{ti} of the unit circle with t = a + b*pi.

Every angle is a pair of rationals; since pi is irrational the pair is a
unique name for the real number.  Order questions are decided against a
rigorous rational enclosure of pi that is refined only when a comparison
cannot be settled at the current width.
"""
from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import total_ordering
from numbers import Rational

__all__ = [
    "ArcError",
    "EmptyArcError",
    "GenAngle",
    "PiOracle",
    "angle",
    "antipode",
    "canonicalize",
    "class_of",
    "cmp_angles",
    "default_oracle",
    "format_angle",
    "in_ccw_arc",
    "parse_angle",
    "rational_in_arc",
    "rotate",
    "s2_arrow",
    "s2_class",
    "s3_arrow",
    "s3_class",
    "shorter_arc_ccw",
    "shorter_arc_contains",
    "simplest_between",
]


class ArcError(ValueError):
    """Raised for degenerate arcs (coinciding or antipodal endpoints)."""


class EmptyArcError(ArcError):
    """No point of the requested class lies inside the arc.

    ``lo`` and ``hi`` are the lifted real bounds of the arc that was searched.
    """

    def __init__(self, message, lo, hi):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


def _arctan_inv(x: int, one: int) -> tuple[int, int]:
    """Fixed-point ``one * atan(1/x)`` and a bound on its absolute error.

    ``floor(floor(a/b)/c) == floor(a/(b*c))`` for positive integers, so every
    summand is within one unit of its exact value and the alternating tail
    after the last nonzero term is below one unit.
    """
    total = 0
    term = one // x
    x2 = x * x
    n = 1
    sign = 1
    terms = 0
    while term:
        total += sign * (term // n)
        term //= x2
        n += 2
        sign = -sign
        terms += 1
    return total, terms + 1


def _machin_enclosure(bits: int) -> tuple[Fraction, Fraction]:
    one = 1 << bits
    a5, e5 = _arctan_inv(5, one)
    a239, e239 = _arctan_inv(239, one)
    approx = 16 * a5 - 4 * a239
    err = 16 * e5 + 4 * e239
    return Fraction(approx - err, one), Fraction(approx + err, one)


class PiOracle:
    """A shrinking certified enclosure ``lo < pi < hi``.

    Refinement is guarded by a lock so one oracle can be shared by threads.
    """

    SEED = (Fraction(314159265, 10**8), Fraction(314159266, 10**8))

    def __init__(self, floor_digits: int | None = None):
        self._lock = threading.Lock()
        self._set(*self.SEED)
        self._bits = 32
        self.refinements = 0
        if floor_digits is None:
            env = os.environ.get("FORGE_PI_PRECISION")
            floor_digits = int(env) if env else None
        if floor_digits:
            target = Fraction(1, 10**floor_digits)
            while self.width > target:
                self.refine()

    @property
    def lo(self) -> Fraction:
        return self._lo

    @property
    def hi(self) -> Fraction:
        return self._hi

    @property
    def width(self) -> Fraction:
        return self._hi - self._lo

    def enclosure(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            return self._lo, self._hi

    def _set(self, lo: Fraction, hi: Fraction):
        self._lo, self._hi = lo, hi
        den = lo.denominator * hi.denominator // gcd(lo.denominator, hi.denominator)
        self._int = (lo.numerator * (den // lo.denominator), hi.numerator * (den // hi.denominator), den)

    def refine(self) -> tuple[Fraction, Fraction]:
        with self._lock:
            old = self._hi - self._lo
            while True:
                self._bits *= 2
                lo, hi = _machin_enclosure(self._bits)
                lo, hi = max(lo, self._lo), min(hi, self._hi)
                if hi - lo < old:
                    break
            self._set(lo, hi)
            self.refinements += 1
            return lo, hi

    def sign(self, a: Fraction, b: Fraction) -> int:
        """Sign of ``a + b*pi``."""
        if b == 0:
            return (a > 0) - (a < 0)
        # sign(a + b*pi) == sign(A + B*pi) with integers A, B
        A = a.numerator * b.denominator
        B = b.numerator * a.denominator
        # most comparisons are settled by the small seed enclosure
        L, H, D = _SEED_INT
        lo_v, hi_v = (A * D + B * L, A * D + B * H) if B > 0 else (A * D + B * H, A * D + B * L)
        if lo_v > 0:
            return 1
        if hi_v < 0:
            return -1
        while True:
            L, H, D = self._int
            if B > 0:
                vlo, vhi = A * D + B * L, A * D + B * H
            else:
                vlo, vhi = A * D + B * H, A * D + B * L
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            # -A/B is rational, so it is not pi and refinement terminates
            self.refine()


_SEED_INT = (314159265, 314159266, 10**8)
_DEFAULT = PiOracle()


def default_oracle() -> PiOracle:
    return _DEFAULT


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@total_ordering
@dataclass(frozen=True)
class GenAngle:
    """The real number ``a + b*pi`` (used as an angle in radians)."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))

    @classmethod
    def coerce(cls, x) -> "GenAngle":
        if isinstance(x, GenAngle):
            return x
        if isinstance(x, str):
            return parse_angle(x)
        return cls(_frac(x), Fraction(0))

    @property
    def is_rational(self) -> bool:
        """True for points of S, i.e. angles with no pi component."""
        return self.b == 0

    def __add__(self, other):
        try:
            o = GenAngle.coerce(other)
        except TypeError:
            return NotImplemented
        return GenAngle(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GenAngle.coerce(other)
        except TypeError:
            return NotImplemented
        return GenAngle(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        try:
            o = GenAngle.coerce(other)
        except TypeError:
            return NotImplemented
        return GenAngle(o.a - self.a, o.b - self.b)

    def __neg__(self):
        return GenAngle(-self.a, -self.b)

    def __mul__(self, k):
        k = _frac(k)
        return GenAngle(self.a * k, self.b * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GenAngle):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __lt__(self, other):
        try:
            o = GenAngle.coerce(other)
        except TypeError:
            return NotImplemented
        return cmp_angles(self, o) < 0

    def __float__(self):
        return float(self.a) + float(self.b) * 3.141592653589793

    def __str__(self):
        return format_angle(self)


PI = GenAngle(0, 1)
TWO_PI = GenAngle(0, 2)


def angle(a=0, b=0) -> GenAngle:
    return GenAngle(a, b)


def _parse_coeff(text: str, whole: str) -> Fraction:
    sign = 1
    while text[:1] in ("+", "-"):
        if text[0] == "-":
            sign = -sign
        text = text[1:].strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    if not text:
        return Fraction(sign)
    try:
        return sign * Fraction(text)
    except ValueError:
        raise ValueError(f"malformed angle: {whole!r}") from None


def parse_angle(text: str) -> GenAngle:
    """Parse ``"a+b*pi"`` text, e.g. ``"7/2+(-1)*pi"``, ``"3"``, ``"2/3*pi"``."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty angle")
    if "pi" not in s:
        return GenAngle(_parse_coeff(s, text), 0)
    if not s.endswith("pi") or s.count("pi") > 1:
        raise ValueError(f"malformed angle: {text!r}")
    s = s[:-2]
    if s.endswith("*"):
        s = s[:-1]
    depth = 0
    split = None
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0 and s[i - 1] not in "+-(":
            split = i
    if split is None:
        return GenAngle(0, _parse_coeff(s, text))
    return GenAngle(_parse_coeff(s[:split], text), _parse_coeff(s[split:], text))


def format_angle(x: GenAngle) -> str:
    b = str(x.b)
    if x.b < 0:
        b = f"({b})"
    return f"{x.a}+{b}*pi"


def cmp_angles(x, y, oracle: PiOracle | None = None) -> int:
    """-1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    x = GenAngle.coerce(x)
    y = GenAngle.coerce(y)
    return (oracle or _DEFAULT).sign(x.a - y.a, x.b - y.b)


def _floor_div_two_pi(x: GenAngle, oracle: PiOracle) -> int:
    # float guess, then exact correction
    try:
        k = math.floor(float(x.a) / (2 * math.pi) + float(x.b) / 2)
    except OverflowError:
        lo, hi = oracle.enclosure()
        est = x.a / (lo + hi) + x.b / 2
        k = est.numerator // est.denominator
    while oracle.sign(x.a, x.b - 2 * k) < 0:
        k -= 1
    while oracle.sign(x.a, x.b - 2 * (k + 1)) >= 0:
        k += 1
    return k


def canonicalize(x, oracle: PiOracle | None = None) -> GenAngle:
    """The representative of the same circle point with value in [0, 2*pi)."""
    x = GenAngle.coerce(x)
    k = _floor_div_two_pi(x, oracle or _DEFAULT)
    if k == 0:
        return x
    return GenAngle(x.a, x.b - 2 * k)


def rotate(x, times: int = 1) -> GenAngle:
    """Rotation by 2*pi/3 (``times`` may be negative)."""
    x = GenAngle.coerce(x)
    return GenAngle(x.a, x.b + Fraction(2 * times, 3))


def antipode(x) -> GenAngle:
    x = GenAngle.coerce(x)
    return GenAngle(x.a, x.b + 1)


def in_ccw_arc(x, s, t, oracle: PiOracle | None = None) -> bool:
    """Whether ``x`` lies strictly inside the arc swept counterclockwise from s to t."""
    span = canonicalize(GenAngle.coerce(t) - s, oracle)
    if span == 0:
        raise ArcError("arc endpoints coincide")
    off = canonicalize(GenAngle.coerce(x) - s, oracle)
    return off != 0 and cmp_angles(off, span, oracle) < 0


def shorter_arc_ccw(s, t, oracle: PiOracle | None = None) -> tuple[GenAngle, GenAngle]:
    """Orient the shorter arc between s and t counterclockwise."""
    s = GenAngle.coerce(s)
    t = GenAngle.coerce(t)
    span = canonicalize(t - s, oracle)
    if span == 0:
        raise ArcError("arc endpoints coincide")
    c = cmp_angles(span, PI, oracle)
    if c == 0:
        raise ArcError("arc endpoints are antipodal")
    return (s, t) if c < 0 else (t, s)


def shorter_arc_contains(x, s, t, oracle: PiOracle | None = None) -> bool:
    lo, hi = shorter_arc_ccw(s, t, oracle)
    return in_ccw_arc(x, lo, hi, oracle)


# Float filter for rational inputs.  A rational r has r/(2*pi) computed to
# well under 1e-12 turns when |r| < 1e6, so a float result further than
# _MARGIN from every cut point is certain; anything closer goes exact.
_MARGIN = 1e-9
_FILTER_LIMIT = 10**6


def _turns(x) -> float | None:
    """x/(2*pi) mod 1 as a float, for moderate rationals only."""
    if isinstance(x, GenAngle):
        if x.b != 0:
            return None
        x = x.a
    if not isinstance(x, (int, Fraction)) or abs(x) >= _FILTER_LIMIT:
        return None
    return (float(x) / (2 * math.pi)) % 1.0


def _filtered(t: float | None, cuts) -> int | None:
    """Index of the first cut above t, or None when t is too close to a cut."""
    if t is None:
        return None
    for i, c in enumerate(cuts):
        if abs(t - c) <= _MARGIN:
            return None
        if t < c:
            return i
    return None if 1.0 - t <= _MARGIN else len(cuts)


def _diff_in(q1, q2, width: GenAngle, oracle) -> bool:
    if not isinstance(q1, GenAngle) and not isinstance(q2, GenAngle):
        try:
            i = _filtered(_turns(Fraction(q2) - Fraction(q1)), (0.0, float(width.b) / 2))
        except TypeError:
            i = None
        if i is not None:
            return i == 1
    d = canonicalize(GenAngle.coerce(q2) - q1, oracle)
    return d != 0 and cmp_angles(d, width, oracle) < 0


def s2_arrow(q1, q2, oracle: PiOracle | None = None) -> bool:
    """Arrow of S(2): q2 - q1 lies in (0, pi) modulo 2*pi."""
    return _diff_in(q1, q2, PI, oracle)


_TWO_THIRDS_PI = GenAngle(0, Fraction(2, 3))


def s3_arrow(q1, q2, oracle: PiOracle | None = None) -> bool:
    """Arrow of S(3): q2 - q1 lies in (0, 2*pi/3) modulo 2*pi."""
    return _diff_in(q1, q2, _TWO_THIRDS_PI, oracle)


# class arcs as (start, end, name) with pi-coefficients, covering [0, 2*pi)
_CLASS_ARCS = {
    "S2": [(Fraction(1, 2), Fraction(3, 2), "A"), (Fraction(-1, 2), Fraction(1, 2), "B")],
    "S3": [
        (Fraction(1, 2), Fraction(7, 6), "A"),
        (Fraction(7, 6), Fraction(11, 6), "B"),
        (Fraction(-1, 6), Fraction(1, 2), "C"),
    ],
}
CLASSES = {"S2": ("A", "B"), "S3": ("A", "B", "C")}
# class boundaries in turns, and the class below each boundary
_TURN_CUTS = {
    "S2": ((0.25, 0.75), ("B", "A", "B")),
    "S3": ((0.25, 7 / 12, 11 / 12), ("C", "A", "B", "C")),
}


def class_of(x, model: str, oracle: PiOracle | None = None) -> str:
    """Partition class of a circle point for model ``"S2"`` or ``"S3"``."""
    try:
        arcs = _CLASS_ARCS[model]
    except KeyError:
        raise ValueError(f"unknown model {model!r}") from None
    i = _filtered(_turns(x), _TURN_CUTS[model][0])
    if i is not None:
        return _TURN_CUTS[model][1][i]
    v = canonicalize(x, oracle)
    for lo, hi, name in arcs:
        for k in (0, 2):
            if cmp_angles(v, GenAngle(0, lo + k), oracle) > 0 and cmp_angles(v, GenAngle(0, hi + k), oracle) < 0:
                return name
    raise ValueError(f"{format_angle(v)} lies on a class boundary")


def s2_class(q, oracle: PiOracle | None = None) -> str:
    return class_of(q, "S2", oracle)


def s3_class(q, oracle: PiOracle | None = None) -> str:
    return class_of(q, "S3", oracle)


def _largest(pred) -> int:
    """Largest k >= 1 with pred(k), given pred(1) and pred monotone decreasing."""
    k = 1
    while pred(2 * k):
        k *= 2
    lo, hi = k, 2 * k  # pred(lo) true, pred(hi) false
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def simplest_between(lo, hi, oracle: PiOracle | None = None) -> Fraction:
    """The Stern-Brocot simplest rational in the open interval (lo, hi).

    Bounds may be rationals or :class:`GenAngle`; all comparisons are exact.
    """
    lo = GenAngle.coerce(lo)
    hi = GenAngle.coerce(hi)
    if cmp_angles(lo, hi, oracle) >= 0:
        raise ArcError("empty interval")
    if cmp_angles(lo, 0, oracle) < 0 < cmp_angles(hi, 0, oracle):
        return Fraction(0)
    if cmp_angles(hi, 0, oracle) <= 0:
        return -simplest_between(-hi, -lo, oracle)

    def le_lo(p, q):
        return cmp_angles(GenAngle(Fraction(p, q)), lo, oracle) <= 0

    def ge_hi(p, q):
        return cmp_angles(GenAngle(Fraction(p, q)), hi, oracle) >= 0

    p0, q0, p1, q1 = 0, 1, 1, 0
    while True:
        p, q = p0 + p1, q0 + q1
        if le_lo(p, q):
            k = _largest(lambda k: le_lo(p0 + k * p1, q0 + k * q1))
            p0, q0 = p0 + k * p1, q0 + k * q1
        elif ge_hi(p, q):
            k = _largest(lambda k: ge_hi(k * p0 + p1, k * q0 + q1))
            p1, q1 = k * p0 + p1, k * q0 + q1
        else:
            return Fraction(p, q)


def rational_in_arc(s, t, class_filter: tuple[str, str] | None = None,
                    oracle: PiOracle | None = None) -> Fraction:
    """A rational q with e^{qi} strictly inside the counterclockwise arc s -> t.

    The arc is lifted to the real interval starting at the canonical value of
    ``s``; the answer is the simplest rational there (restricted to the class
    ``class_filter = (model, name)`` when given), so it does not depend on
    the state of the pi enclosure.
    """
    s = canonicalize(s, oracle)
    span = canonicalize(GenAngle.coerce(t) - s, oracle)
    if span == 0:
        raise ArcError("arc endpoints coincide")
    lo, hi = s, s + span
    if class_filter is None:
        return simplest_between(lo, hi, oracle)
    model, name = class_filter
    pieces = []
    for a, b, cname in _CLASS_ARCS[model]:
        if cname != name:
            continue
        for k in (0, 2, 4):
            plo = max(lo, GenAngle(0, a + k))
            phi = min(hi, GenAngle(0, b + k))
            if cmp_angles(plo, phi, oracle) < 0:
                pieces.append((plo, phi))
    if not pieces:
        raise EmptyArcError(f"no point of class {name} in the arc", lo, hi)
    found = [simplest_between(a, b, oracle) for a, b in pieces]
    return min(found, key=lambda q: (q.denominator, abs(q.numerator)))
