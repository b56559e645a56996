"""Finite-precision arithmetic in Zp/Qp and normalized points of P^1(Zp).

Values are stored as p^val * unit with the unit mantissa reduced modulo
p^prec, so `prec` counts significant digits (relative precision) and
val + prec is the absolute precision: the value is known modulo p^(val+prec).

Two distinguished degenerate states exist:

* exact zero       -- valuation +infinity, produced only by constructions
                      that are zero on the nose (never by rounding);
* inexact zero     -- prec == 0, written O(p^k): some value of valuation
                      >= k that cancellation has made indistinguishable
                      from zero.

There is deliberately no absolute ``==``: equality is only meaningful
modulo a stated power of p, via :meth:`PadicNumber.eq_mod`.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    BothZero,
    InsufficientPrecision,
    NotSeparable,
    ParseError,
    PrecisionExhausted,
)

#: Guard digits added on top of a report's target precision.
DEFAULT_GUARD_DIGITS = 4


def padic_valuation(n: int, p: int) -> int:
    """Largest e with p^e | n, for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0 is +infinity")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNumber:
    """An element of Qp carried at finite precision.

    Immutable; all arithmetic returns fresh instances and never reports
    more precision than the inputs justify.
    """

    __slots__ = ("p", "val", "unit", "prec", "_exact_zero")

    def __init__(self, p: int, val: int, unit: int, prec: int, *, _exact_zero: bool = False):
        if p < 3 or p % 2 == 0:
            raise ValueError(f"p must be an odd prime, got {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "_exact_zero", _exact_zero)
        if _exact_zero:
            object.__setattr__(self, "val", 0)
            object.__setattr__(self, "unit", 0)
            object.__setattr__(self, "prec", 0)
            return
        if prec < 0:
            raise ValueError("precision must be >= 0")
        if prec == 0:
            unit = 0
        else:
            unit %= p ** prec
            if unit == 0:
                # Mantissa vanished entirely: only O(p^(val+prec)) is known.
                val += prec
                prec = 0
            else:
                shift = padic_valuation(unit, p)
                if shift:
                    # Keep the invariant p ∤ unit; digits shifted into the
                    # valuation are no longer significant.
                    unit //= p ** shift
                    val += shift
                    prec -= shift
                    unit %= p ** prec if prec else 1
                    if prec == 0 or unit == 0:
                        val += prec
                        prec = 0
                        unit = 0
        object.__setattr__(self, "val", val)
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, *a):  # pragma: no cover - defensive
        raise AttributeError("PadicNumber is immutable")

    # ---- constructors ----

    @classmethod
    def zero(cls, p: int) -> "PadicNumber":
        """The exact zero of Qp."""
        return cls(p, 0, 0, 0, _exact_zero=True)

    @classmethod
    def inexact_zero(cls, p: int, abs_prec: int) -> "PadicNumber":
        """O(p^abs_prec): an unknown value of valuation >= abs_prec."""
        return cls(p, abs_prec, 0, 0)

    @classmethod
    def from_int(cls, n: int, p: int, prec: int) -> "PadicNumber":
        if n == 0:
            return cls.zero(p)
        v = padic_valuation(n, p)
        return cls(p, v, n // p ** v, prec)

    @classmethod
    def from_residue(cls, r: int, p: int, n: int) -> "PadicNumber":
        """The value r + O(p^n): absolute precision n, however deep r sits."""
        r %= p ** n
        if r == 0:
            return cls.inexact_zero(p, n)
        v = padic_valuation(r, p)
        return cls(p, v, r // p ** v, n - v)

    @classmethod
    def from_rational(cls, q, p: int, prec: int) -> "PadicNumber":
        q = Fraction(q)
        if q == 0:
            return cls.zero(p)
        num, den = q.numerator, q.denominator
        vn = padic_valuation(num, p) if num else 0
        vd = padic_valuation(den, p)
        num //= p ** vn
        den //= p ** vd
        unit = num * pow(den, -1, p ** prec)
        return cls(p, vn - vd, unit, prec)

    # ---- state ----

    @property
    def is_exact_zero(self) -> bool:
        return self._exact_zero

    @property
    def is_zero_like(self) -> bool:
        """True when the value cannot be told apart from zero."""
        return self._exact_zero or self.prec == 0

    @property
    def valuation(self):
        """Valuation; +inf for the exact zero, a lower bound for O(p^k)."""
        if self._exact_zero:
            return float("inf")
        return self.val

    @property
    def abs_prec(self):
        """The value is known modulo p^abs_prec."""
        if self._exact_zero:
            return float("inf")
        return self.val + self.prec

    def is_unit(self) -> bool:
        return not self.is_zero_like and self.val == 0

    # ---- congruence ----

    def residue(self, n: int) -> int:
        """The value mod p^n as an integer in [0, p^n); requires abs_prec >= n."""
        if self.abs_prec < n:
            raise InsufficientPrecision(
                f"value known mod {self.p}^{self.abs_prec}, asked mod {self.p}^{n}")
        if self.is_zero_like or self.val >= n:
            return 0
        if self.val < 0:
            raise ValueError("negative valuation has no residue in Z/p^n")
        return (self.unit * self.p ** self.val) % self.p ** n

    def eq_mod(self, other: "PadicNumber", n: int) -> bool:
        """Congruence modulo p^n. The only equality this type offers."""
        self._check_same_prime(other)
        return self.residue(n) == other.residue(n) if n > 0 else True

    def is_zero_mod(self, n: int) -> bool:
        return self.residue(n) == 0

    def digit(self, i: int) -> int:
        """Coefficient of p^i in the expansion (0 <= digit < p)."""
        if self.abs_prec < i + 1:
            raise InsufficientPrecision(f"digit {i} not determined")
        if self.is_zero_like or self.val > i:
            return 0
        if self.val < 0 and i < self.val:
            return 0
        return (self.unit // self.p ** (i - self.val)) % self.p

    # ---- arithmetic ----

    def _check_same_prime(self, other: "PadicNumber"):
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            return other
        if isinstance(other, int):
            return PadicNumber.from_int(other, self.p, max(self.prec, 1) + self.val.__abs__() + 2)
        if isinstance(other, Fraction):
            return PadicNumber.from_rational(other, self.p, max(self.prec, 1) + abs(self.val) + 2)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_same_prime(other)
        if self._exact_zero:
            return other
        if other._exact_zero:
            return self
        cap = min(self.abs_prec, other.abs_prec)
        m = min(self.val, other.val)
        modulus = self.p ** (cap - m)
        s = (self.unit * self.p ** (self.val - m)
             + other.unit * self.p ** (other.val - m)) % modulus
        if s == 0:
            return PadicNumber.inexact_zero(self.p, cap)
        v = padic_valuation(s, self.p)
        return PadicNumber(self.p, m + v, s // self.p ** v, cap - m - v)

    __radd__ = __add__

    def __neg__(self):
        if self._exact_zero:
            return self
        if self.prec == 0:
            return self
        return PadicNumber(self.p, self.val, self.p ** self.prec - self.unit, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_same_prime(other)
        if self._exact_zero or other._exact_zero:
            return PadicNumber.zero(self.p)
        if self.prec == 0 or other.prec == 0:
            return PadicNumber.inexact_zero(self.p, self.val + other.val)
        prec = min(self.prec, other.prec)
        return PadicNumber(self.p, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        self._check_same_prime(other)
        if other._exact_zero:
            raise ZeroDivisionError("division by exact zero")
        if other.prec == 0:
            raise PrecisionExhausted("division by a value indistinguishable from zero")
        if self._exact_zero:
            return self
        if self.prec == 0:
            return PadicNumber.inexact_zero(self.p, self.val - other.val)
        prec = min(self.prec, other.prec)
        inv = pow(other.unit % self.p ** prec, -1, self.p ** prec)
        return PadicNumber(self.p, self.val - other.val, self.unit * inv, prec)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = PadicNumber.from_int(1, self.p, self.prec if self.prec else 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def shift(self, k: int) -> "PadicNumber":
        """Multiply by p^k exactly."""
        if self._exact_zero:
            return self
        return PadicNumber(self.p, self.val + k, self.unit, self.prec) if self.prec \
            else PadicNumber.inexact_zero(self.p, self.val + k)

    def sqrt(self) -> "PadicNumber":
        """A square root, when one exists in Qp (p odd)."""
        if self._exact_zero:
            return self
        if self.prec == 0:
            raise PrecisionExhausted("square root of O(p^k)")
        if self.val % 2:
            raise ValueError("odd valuation: no square root in Qp")
        u, p, prec = self.unit, self.p, self.prec
        r0 = pow(u, (p + 1) // 4, p) if p % 4 == 3 else _tonelli(u % p, p)
        if r0 is None or (r0 * r0 - u) % p != 0:
            raise ValueError("unit part is not a quadratic residue mod p")
        # Hensel lift x^2 = u.
        r, k = r0, 1
        while k < prec:
            k = min(2 * k, prec)
            mod = p ** k
            r = (r + (u - r * r) * pow(2 * r, -1, mod)) % mod
        return PadicNumber(p, self.val // 2, r, prec)

    # ---- no absolute equality ----

    def __eq__(self, other):
        raise TypeError("PadicNumber has no absolute equality; use eq_mod(other, n)")

    __hash__ = None

    def __repr__(self):
        if self._exact_zero:
            return f"PadicNumber(0, p={self.p})"
        if self.prec == 0:
            return f"PadicNumber(O({self.p}^{self.val}))"
        return f"PadicNumber({self.unit}*{self.p}^{self.val} + O({self.p}^{self.abs_prec}))"

    def __str__(self):
        if self._exact_zero:
            return "0"
        if self.prec == 0:
            return f"O({self.p}^{self.val})"
        if self.val >= 0:
            return f"{self.residue(self.val + self.prec)} + O({self.p}^{self.abs_prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.abs_prec})"


def _tonelli(a: int, p: int) -> int | None:
    """Square root of a mod p (p odd prime), None if a is a non-residue."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    s, e = p - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    n = 2
    while pow(n, (p - 1) // 2, p) != p - 1:
        n += 1
    x = pow(a, (s + 1) // 2, p)
    b = pow(a, s, p)
    g = pow(n, s, p)
    r = e
    while True:
        t, m = b, 0
        for m in range(r):
            if t == 1:
                break
            t = t * t % p
        if m == 0:
            return x
        gs = pow(g, 2 ** (r - m - 1), p)
        g = gs * gs % p
        x = x * gs % p
        b = b * g % p
        r = m


AFFINE = "affine"      # canonical form (x0, 1)
INFINITY = "infinity"  # canonical form (1, y0) with val(y0) >= 1


class ProjectiveSlope:
    """A normalized point of P^1(Zp): (x0, 1) or (1, y0) with p | y0.

    Built through :func:`normalize_slope`; instances are immutable and the
    normalization is idempotent.
    """

    __slots__ = ("x", "y", "canonical_form")

    def __init__(self, x: PadicNumber, y: PadicNumber, canonical_form: str):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "canonical_form", canonical_form)

    def __setattr__(self, *a):  # pragma: no cover - defensive
        raise AttributeError("ProjectiveSlope is immutable")

    @property
    def p(self) -> int:
        return self.x.p

    @property
    def abs_prec(self):
        return min(self.x.abs_prec, self.y.abs_prec)

    def entry(self) -> PadicNumber:
        """The informative coordinate: x in affine form, y at infinity."""
        return self.x if self.canonical_form == AFFINE else self.y

    def eq_mod(self, other: "ProjectiveSlope", n: int) -> bool:
        """Equality as points of P^1(Z/p^n)."""
        if self.p != other.p:
            raise ValueError("mixed primes")
        if self.abs_prec < n or other.abs_prec < n:
            raise InsufficientPrecision(f"slopes not known mod {self.p}^{n}")
        if self.canonical_form != other.canonical_form:
            # (x0, 1) and (1, y0) with p | y0 can never agree mod p^n, n >= 1.
            return n <= 0
        return self.entry().eq_mod(other.entry(), n)

    def to_text(self, n: int | None = None) -> str:
        if n is None:
            n = self.abs_prec
        if self.abs_prec < n:
            raise InsufficientPrecision(f"slope not known mod {self.p}^{n}")
        return f"{self.x.residue(n)} + O({self.p}^{n}) : {self.y.residue(n)} + O({self.p}^{n})"

    def __repr__(self):
        try:
            return f"ProjectiveSlope({self.to_text()})"
        except InsufficientPrecision:  # pragma: no cover
            return "ProjectiveSlope(<exhausted>)"

    def __eq__(self, other):
        raise TypeError("ProjectiveSlope has no absolute equality; use eq_mod(other, n)")

    __hash__ = None


def normalize_slope(x: PadicNumber, y: PadicNumber) -> ProjectiveSlope:
    """Canonical representative of (x : y) in P^1(Zp).

    Divides out the common power of p, then scales so the slope reads
    (x/y, 1) when that quotient lies in Zp, and (1, y/x) otherwise.
    """
    if x.p != y.p:
        raise ValueError("mixed primes")
    p = x.p
    if x.is_exact_zero and y.is_exact_zero:
        raise BothZero("(0 : 0) is not a point of P^1")
    if x.is_zero_like and y.is_zero_like:
        raise PrecisionExhausted("both coordinates indistinguishable from zero")
    # The smaller valuation decides the common factor; a zero-like entry
    # only caps what we may claim about the other one.
    vx = x.valuation
    vy = y.valuation
    m = min(vx, vy)
    if min(x.abs_prec, y.abs_prec) - m <= 0:
        raise PrecisionExhausted("no significant digit survives normalization")
    xs = x.shift(-m) if not x.is_exact_zero else x
    ys = y.shift(-m) if not y.is_exact_zero else y
    # The unit coordinate is exactly 1; it carries the slope's absolute
    # precision, which is that of the other (normalized) entry.
    if ys.is_unit():
        xn = xs / ys
        a = xn.abs_prec
        one = PadicNumber.from_int(1, p, a if a != float("inf") else max(ys.prec, 1))
        return ProjectiveSlope(xn, one, AFFINE)
    # y/x has positive valuation here, so x is the unit coordinate.
    yn = ys / xs
    a = yn.abs_prec
    one = PadicNumber.from_int(1, p, a if a != float("inf") else max(xs.prec, 1))
    return ProjectiveSlope(one, yn, INFINITY)


def slope_bucket(s: ProjectiveSlope, n: int = 1):
    """Bucket of s at level n, in the order (0,1), ..., (p-1,1), (1,0).

    Level 1 returns an index in [0, p]; level n >= 2 returns the tuple
    (level-1 bucket, digit 1, ..., digit n-1) of the informative entry.
    """
    if n < 1:
        raise ValueError("level must be >= 1")
    if s.abs_prec < n:
        raise InsufficientPrecision(f"slope not known mod {s.p}^{n}")
    if s.canonical_form == AFFINE:
        base = s.x.residue(1)
    else:
        base = s.p
    if n == 1:
        return base
    e = s.entry()
    return (base,) + tuple(e.digit(i) for i in range(1, n))


def min_distinguishing_precision(slopes: list[ProjectiveSlope]) -> int:
    """Smallest n with all slopes pairwise distinct mod p^n."""
    if not slopes:
        raise ValueError("need at least one slope")
    p = slopes[0].p
    for s in slopes:
        if s.p != p:
            raise ValueError("mixed primes")
    cap = min(s.abs_prec for s in slopes)
    for n in range(1, cap + 1):
        keys = {(s.canonical_form, s.entry().residue(n)) for s in slopes}
        if len(keys) == len(slopes):
            return n
    raise NotSeparable(f"slopes not pairwise distinct mod {p}^{cap}")


def parse_slope(text: str) -> ProjectiveSlope:
    """Parse the textual form "x + O(p^n) : y + O(p^n)"; exact round-trip."""
    try:
        left, right = text.split(":")
        x, xp, xn = _parse_entry(left)
        y, yp, yn = _parse_entry(right)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed slope text {text!r}") from exc
    if xp != yp or xn != yn:
        raise ParseError(f"inconsistent precision tags in {text!r}")
    return normalize_slope(_from_residue(x, xp, xn), _from_residue(y, yp, yn))


def _parse_entry(part: str) -> tuple[int, int, int]:
    part = part.strip()
    value, tag = part.split("+")
    tag = tag.strip()
    if not (tag.startswith("O(") and tag.endswith(")")):
        raise ValueError(part)
    base, _, exp = tag[2:-1].partition("^")
    return int(value.strip()), int(base), int(exp)


def _from_residue(r: int, p: int, n: int) -> PadicNumber:
    return PadicNumber.from_residue(r, p, n)
