"""Exact extended-real scalars.

Every quantity in this package is either a ``fractions.Fraction`` or one of
the singletons below.  Positive infinity is a first-class capacity value;
negative infinity and the indeterminate token only ever appear as outcomes
of gap computations, never inside tables or functions.

Arithmetic conventions follow the layer-cake reading of the integral:
``inf + a = inf`` and ``0 * inf = 0`` (see :func:`layer_product`).
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union


class _ExtendedToken:
    """Common plumbing for the comparison-only singletons."""

    _name = "?"
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return self._name

    def __hash__(self):
        return hash((type(self).__name__,))

    def __eq__(self, other):
        return other is self

    def __ne__(self, other):
        return other is not self


class _Infinity(_ExtendedToken):
    _name = "inf"

    def __lt__(self, other):
        if isinstance(other, (Rational, _Infinity, _NegInfinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, _Infinity):
            return True
        if isinstance(other, (Rational, _NegInfinity)):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (Rational, _NegInfinity)):
            return True
        if isinstance(other, _Infinity):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (Rational, _Infinity, _NegInfinity)):
            return True
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (Rational, _Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return NEG_INF


class _NegInfinity(_ExtendedToken):
    _name = "-inf"

    def __lt__(self, other):
        if isinstance(other, (Rational, _Infinity)):
            return True
        if isinstance(other, _NegInfinity):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (Rational, _Infinity, _NegInfinity)):
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (Rational, _Infinity, _NegInfinity)):
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, _NegInfinity):
            return True
        if isinstance(other, (Rational, _Infinity)):
            return False
        return NotImplemented

    def __neg__(self):
        return INF


class _Indeterminate(_ExtendedToken):
    """Result of an inf - inf cancellation; reported, never resolved."""

    _name = "indeterminate"


INF = _Infinity()
NEG_INF = _NegInfinity()
INDETERMINATE = _Indeterminate()

#: A nonnegative extended real: Fraction or INF.
Value = Union[Fraction, _Infinity]


def is_inf(v) -> bool:
    return v is INF


def ext_add(a: Value, b: Value) -> Value:
    """a + b with inf absorbing."""
    if a is INF or b is INF:
        return INF
    return a + b


def ext_sum(items) -> Value:
    total = Fraction(0)
    for v in items:
        if v is INF:
            return INF
        total += v
    return total


def layer_product(gap: Value, capacity: Value) -> Value:
    """gap * capacity under the conventions 0 * inf = 0 and inf * pos = inf."""
    if gap is INF:
        if capacity is INF:
            return INF
        return INF if capacity > 0 else Fraction(0)
    if capacity is INF:
        return INF if gap > 0 else Fraction(0)
    return gap * capacity


def parse_value(raw, *, allow_inf=True, allow_negative=False) -> Value:
    """Convert JSON-ish input to an exact value.

    Accepts ints, Fractions, "p/q" strings, decimal strings, and the token
    "inf".  Floats are routed through their shortest decimal repr so that a
    literal 0.1 means one tenth, not the nearest binary double.
    """
    if raw is INF:
        v = INF
    elif isinstance(raw, bool):
        raise ValueError(f"not a numeric value: {raw!r}")
    elif isinstance(raw, Fraction):
        v = raw
    elif isinstance(raw, int):
        v = Fraction(raw)
    elif isinstance(raw, float):
        v = Fraction(repr(raw))
    elif isinstance(raw, str):
        text = raw.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            v = INF
        else:
            try:
                v = Fraction(raw.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"cannot parse value {raw!r}") from exc
    else:
        raise ValueError(f"cannot parse value {raw!r}")
    if v is INF:
        if not allow_inf:
            raise ValueError("infinite value not allowed here")
        return v
    if v < 0 and not allow_negative:
        raise ValueError(f"negative value not allowed here: {v}")
    return v


def format_value(v) -> str:
    """Render a value for JSON: "inf", an integer string, or "p/q"."""
    if v is INF:
        return "inf"
    if v is NEG_INF:
        return "-inf"
    if v is INDETERMINATE:
        return "indeterminate"
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def decimal_string(v, digits: int = 12) -> str:
    """Best-effort decimal rendering; exact when the value terminates."""
    if v is INF:
        return "inf"
    if v is NEG_INF:
        return "-inf"
    if v is INDETERMINATE:
        return "indeterminate"
    sign = "-" if v < 0 else ""
    v = abs(v)
    whole, rem = divmod(v.numerator, v.denominator)
    if rem == 0:
        return f"{sign}{whole}"
    frac_digits = []
    for _ in range(digits):
        rem *= 10
        d, rem = divmod(rem, v.denominator)
        frac_digits.append(str(d))
        if rem == 0:
            break
    tail = "" if rem == 0 else "..."
    return f"{sign}{whole}." + "".join(frac_digits) + tail


def json_value(raw):
    """Value ready for json.dump: int when integral, else "p/q" / "inf"."""
    if raw is INF or raw is NEG_INF or raw is INDETERMINATE:
        return format_value(raw)
    if raw.denominator == 1:
        return raw.numerator
    return format_value(raw)
