"""Exact arithmetic in the quadratic field Q[sqrt(2)].

A scalar is a + b*sqrt(2) with rational a, b.  The field is closed under
+,-,*,/ and totally ordered; the sign of a + b*sqrt(2) is decided exactly
by comparing a^2 against 2*b^2.  All probability bookkeeping in this
package runs on these scalars so that clique-bound and polytope verdicts
are exact; floating point enters only inside the SDP solver.
"""

from __future__ import annotations

from fractions import Fraction


class ScalarQ2:
    """Exact element a + b*sqrt(2) of Q[sqrt(2)]."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("ScalarQ2 is immutable")

    # -- coercion -----------------------------------------------------------

    @staticmethod
    def coerce(x) -> "ScalarQ2":
        if isinstance(x, ScalarQ2):
            return x
        if isinstance(x, (int, Fraction)):
            return ScalarQ2(x)
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ScalarQ2")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = ScalarQ2.coerce(other)
        return ScalarQ2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = ScalarQ2.coerce(other)
        return ScalarQ2(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return ScalarQ2.coerce(other) - self

    def __mul__(self, other):
        o = ScalarQ2.coerce(other)
        return ScalarQ2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ScalarQ2.coerce(other)
        den = o.a * o.a - 2 * o.b * o.b
        if den == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(2)]")
        # 1/(a+b v2) = (a-b v2)/(a^2-2 b^2)
        return self * ScalarQ2(o.a / den, -o.b / den)

    def __rtruediv__(self, other):
        return ScalarQ2.coerce(other) / self

    def __neg__(self):
        return ScalarQ2(-self.a, -self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers supported")
        out = ScalarQ2(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- ordering -----------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(2)."""
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare |a| to |b|*sqrt(2) via squares
        cmp = a * a - 2 * b * b
        if a > 0:  # b < 0
            return 1 if cmp > 0 else (-1 if cmp < 0 else 0)
        # a < 0, b > 0
        return 1 if cmp < 0 else (-1 if cmp > 0 else 0)

    def __eq__(self, other):
        try:
            o = ScalarQ2.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        return (self - ScalarQ2.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - ScalarQ2.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - ScalarQ2.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - ScalarQ2.coerce(other)).sign() >= 0

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # -- conversion ---------------------------------------------------------

    def __float__(self):
        return float(self.a) + float(self.b) * 1.4142135623730951

    def __repr__(self):
        return f"ScalarQ2({self.a!r}, {self.b!r})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt2"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*sqrt2"


ZERO = ScalarQ2(0)
ONE = ScalarQ2(1)
SQRT2 = ScalarQ2(0, 1)


def parse_scalar(obj) -> ScalarQ2:
    """Parse a scalar encoding.

    Accepted forms: an int; a string rational "a/b"; a decimal string
    (parsed exactly); or a mapping {"rat": "a/b", "sqrt2": "c/d"} for
    a/b + (c/d)*sqrt(2).  Missing mapping keys default to 0.
    """
    if isinstance(obj, ScalarQ2):
        return obj
    if isinstance(obj, (int, Fraction)):
        return ScalarQ2(obj)
    if isinstance(obj, float):
        raise TypeError(
            "refusing to parse a float scalar; pass a string or rational form"
        )
    if isinstance(obj, str):
        return ScalarQ2(Fraction(obj.strip()))
    if isinstance(obj, dict):
        extra = set(obj) - {"rat", "sqrt2"}
        if extra:
            raise ValueError(f"unknown scalar keys: {sorted(extra)}")
        a = Fraction(str(obj.get("rat", 0)))
        b = Fraction(str(obj.get("sqrt2", 0)))
        return ScalarQ2(a, b)
    raise TypeError(f"cannot parse scalar from {type(obj).__name__}")


def scalar_to_json(s: ScalarQ2):
    """Canonical JSON encoding: plain "a/b" string when rational, else a mapping."""
    s = ScalarQ2.coerce(s)
    if s.b == 0:
        return str(s.a)
    return {"rat": str(s.a), "sqrt2": str(s.b)}
