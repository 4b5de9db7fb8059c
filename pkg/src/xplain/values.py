"""Exact numbers, infinite bounds, and half-open interval endpoints.

Every numeric comparison in the package is exact: values are Python ints or
fractions.Fraction, never finite floats. The only floats that circulate are
the +/-infinity sentinels used for unbounded numerical domains; comparing
them against ints and Fractions is exact in CPython.

Intervals over a numerical feature are half-open, (lo, hi]. Endpoints are
(value, eps) pairs compared lexicographically, where eps == EPS_BELOW marks
a point infinitesimally below `value`. That lets the closed domain [m, M]
travel through the interval machinery as (m^-, M], so m itself stays
testable without any epsilon arithmetic.
"""

from fractions import Fraction

from .errors import ParseError

INF = float("inf")
NEG_INF = float("-inf")

EPS_BELOW = -1


def exact(value):
    """Parse an exact finite number: ints stay int, the rest become Fraction.

    Floats are read through their shortest decimal repr, so 0.85 means
    17/20, not the binary double. Strings accept integer, decimal and "p/q"
    spellings.
    """
    if isinstance(value, bool):
        raise ParseError(f"expected a number, got boolean {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, float):
        if value != value or value == INF or value == NEG_INF:
            raise ParseError(f"non-finite float {value!r} is not a value")
        frac = Fraction(repr(value))
        return int(frac) if frac.denominator == 1 else frac
    if isinstance(value, str):
        try:
            frac = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise ParseError(f"cannot parse number {value!r}") from err
        return int(frac) if frac.denominator == 1 else frac
    raise ParseError(f"cannot parse number of type {type(value).__name__}")


def parse_bound(value):
    """Parse a numerical domain bound; "inf" / "-inf" mean +/-infinity."""
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "+inf"):
            return INF
        if token == "-inf":
            return NEG_INF
    if isinstance(value, float) and (value == INF or value == NEG_INF):
        return value
    return exact(value)


def is_infinite(bound):
    return bound == INF or bound == NEG_INF


def serialize_number(value):
    """JSON form of an exact number: int as-is, Fraction as a "p/q" string."""
    if isinstance(value, int):
        return value
    return str(value)


def serialize_bound(bound):
    if bound == INF:
        return "inf"
    if bound == NEG_INF:
        return "-inf"
    return serialize_number(bound)


def format_number(value):
    """Human-readable form (exact; infinities as inf/-inf)."""
    if isinstance(value, (int, Fraction)):
        return str(value)
    return serialize_bound(value)


# -- interval endpoints ------------------------------------------------------

def below(value):
    """Endpoint just below `value` (used for the closed left domain bound)."""
    return (value, EPS_BELOW)


def at(value):
    return (value, 0)


def interval_is_empty(lo, hi):
    return lo >= hi


def interval_contains(lo, hi, value):
    point = (value, 0)
    return lo < point <= hi


def domain_interval(lo_bound, hi_bound):
    """The domain [m, M] as a half-open interval (m^-, M]."""
    lo = (NEG_INF, 0) if lo_bound == NEG_INF else (lo_bound, EPS_BELOW)
    hi = (INF, 0) if hi_bound == INF else (hi_bound, 0)
    return lo, hi
