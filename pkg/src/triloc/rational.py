"""Exact rational scalars used throughout the rational arithmetic mode.

gmpy2.mpq is used when available (an order of magnitude faster than
fractions.Fraction in the LP pivot loops); otherwise we fall back to the
standard library. Both types interoperate with Python ints, so the rest of
the code never needs to know which one is active.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    RAT = type(_mpq(0))
    RATIONAL_BACKEND = "gmpy2"

    def rat(num=0, den=1):
        return _mpq(num, den)

except ImportError:  # pragma: no cover - exercised only without gmpy2
    RAT = Fraction
    RATIONAL_BACKEND = "fractions"

    def rat(num=0, den=1):
        return Fraction(num, den)


R0 = rat(0)
R1 = rat(1)


def is_rational(x) -> bool:
    return isinstance(x, (RAT, Fraction, int))


def rat_from(x):
    """Coerce an int, Fraction, mpq or 'num/den' string to the active type."""
    if isinstance(x, RAT):
        return x
    if isinstance(x, (int, Fraction)):
        return rat(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str):
    """Parse 'num/den' or 'num' into an exact rational."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return rat(int(num), int(den))
    return rat(int(s))


def format_rational(x) -> str:
    x = rat_from(x)
    num, den = x.numerator, x.denominator
    return f"{num}/{den}" if den != 1 else f"{num}"


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, Fraction) else x


def snap(x: float, max_denominator: int = 10**6):
    """Explicitly snap a double to the nearest rational with bounded
    denominator. This is the only sanctioned double->rational conversion."""
    f = Fraction(x).limit_denominator(max_denominator)
    return rat(f.numerator, f.denominator)
