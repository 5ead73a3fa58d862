"""Independent reference implementations used only by the tests.

These share no code with the package: pi comes from the decimal-module
recipe (a different series from the one the package refines), and the
combinatorial oracles are brute force.
"""
from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import permutations

getcontext().prec = 600


def _decimal_pi():
    # the recipe from the decimal module documentation
    getcontext().prec += 2
    three = Decimal(3)
    lasts, t, s, n, na, d, da = 0, three, 3, 1, 0, 0, 24
    while s != lasts:
        lasts = s
        n, na = n + na, na + 8
        d, da = d + da, da + 32
        t = (t * n) / d
        s += t
    getcontext().prec -= 2
    return +s


PI = _decimal_pi()
TWO_PI = 2 * PI


def dec(q) -> Decimal:
    q = Fraction(q)
    return Decimal(q.numerator) / Decimal(q.denominator)


def value(a, b) -> Decimal:
    """a + b*pi to ~600 digits."""
    return dec(a) + dec(b) * PI


def mod_two_pi(x: Decimal) -> Decimal:
    r = x % TWO_PI
    return r + TWO_PI if r < 0 else r


def simplest_brute(lo: Decimal, hi: Decimal, max_den: int = 2000) -> Fraction:
    """Smallest denominator, then smallest |numerator|, strictly inside (lo, hi)."""
    if lo < 0 < hi:
        return Fraction(0)
    for q in range(1, max_den + 1):
        # the numerator of least absolute value sits next to the end nearer 0
        if lo >= 0:
            num = int((lo * q).to_integral_value(rounding="ROUND_FLOOR")) + 1
        else:
            num = int((hi * q).to_integral_value(rounding="ROUND_CEILING")) - 1
        if lo < Decimal(num) / q < hi:
            return Fraction(num, q)
    raise ValueError("interval too narrow for the brute-force search")


def s2_arrow_ref(x, y) -> bool:
    d = mod_two_pi(dec(y) - dec(x))
    return 0 < d < PI


def s3_arrow_ref(x, y) -> bool:
    d = mod_two_pi(dec(y) - dec(x))
    return 0 < d < TWO_PI / 3


def s2_class_ref(x) -> str:
    v = mod_two_pi(dec(x))
    return "A" if PI / 2 < v < 3 * PI / 2 else "B"


def s3_class_ref(x) -> str:
    v = mod_two_pi(dec(x))
    if PI / 2 < v < 7 * PI / 6:
        return "A"
    if 7 * PI / 6 < v < 11 * PI / 6:
        return "B"
    return "C"


def iso_brute(X, Y):
    if X.n != Y.n:
        return None
    for perm in permutations(range(X.n)):
        if X.labels is not None and any(X.labels[i] != Y.labels[perm[i]] for i in range(X.n)):
            continue
        if all(X.has(i, j) == Y.has(perm[i], perm[j]) for i in range(X.n) for j in range(X.n)):
            return perm
    return None
