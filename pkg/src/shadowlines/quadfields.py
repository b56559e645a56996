"""Imaginary quadratic field bookkeeping.

Eligibility of a discriminant D < 0 for a pair (E, p) means: D fundamental,
every prime dividing the conductor splits in Q(sqrt(D)), p splits, and the
ingested twist rank equals 1.  Class numbers are computed exactly by
counting reduced binary quadratic forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import NotFundamental

ELIGIBLE = "eligible"
INELIGIBLE = "ineligible"
SKIPPED = "skipped"

SKIP_POINT_SEARCH = "point-search-failed"
SKIP_FACTORIZATION = "factorization-timeout"


def kronecker_symbol(a: int, n: int) -> int:
    """The Kronecker symbol (a|n), for any nonzero n."""
    if n == 0:
        raise ValueError("Kronecker symbol undefined for n = 0")
    if n < 0:
        return (-1 if a < 0 else 1) * kronecker_symbol(a, -n)
    # strip factors of two using (a|2) = 0, 1, -1 for a even, ±1 mod 8
    t = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            t = -t
    a %= n
    # Jacobi symbol by quadratic reciprocity
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def _squarefree(n: int) -> bool:
    n = abs(n)
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1 if d == 2 else 2
    return True


def is_fundamental_discriminant(D: int) -> bool:
    """D ≡ 1 mod 4 squarefree, or D = 4m with m ≡ 2, 3 mod 4 squarefree."""
    if D == 0 or D == 1:
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def class_number(D: int) -> int:
    """h(D) for a fundamental discriminant D < 0, by counting reduced forms
    (a, b, c) with b^2 - 4ac = D, |b| <= a <= c, and b >= 0 when |b| = a or
    a = c."""
    if D >= 0 or not is_fundamental_discriminant(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    h = 0
    b = D % 2
    bound = math.isqrt(-D // 3)
    while b <= bound:
        q = (b * b - D) // 4
        a = max(b, 1)
        while a * a <= q:
            if a != 0 and q % a == 0:
                c = q // a
                if b <= a <= c:
                    h += 1
                    # (a, -b, c) is a distinct class unless the form is
                    # on the reduction boundary
                    if 0 < b < a < c:
                        h += 1
            a += 1
        b += 2
    return h


@dataclass(frozen=True)
class SkipReason:
    """Why a field was dropped: one of the two loss modes, or other."""

    tag: str
    detail: str = ""

    def __post_init__(self):
        if self.tag not in (SKIP_POINT_SEARCH, SKIP_FACTORIZATION, "other"):
            raise ValueError(f"unknown skip tag {self.tag}")


@dataclass
class FieldRecord:
    """Per-discriminant bookkeeping for one (E, p) run."""

    discriminant: int
    eligibility: str = ELIGIBLE
    reason: str = ""
    class_number: int | None = None
    twist_rank: int | None = None
    p_split: bool | None = None
    point_data: dict | None = None
    skip: SkipReason | None = None

    def __post_init__(self):
        if not is_fundamental_discriminant(self.discriminant):
            raise NotFundamental(f"{self.discriminant} is not fundamental")
        if self.discriminant >= 0:
            raise ValueError("imaginary quadratic fields only")


def fundamental_discriminants(bound: int):
    """All fundamental D with 0 > D >= -bound, by |D| ascending."""
    for a in range(1, bound + 1):
        D = -a
        if is_fundamental_discriminant(D):
            yield D


def eligible_discriminants(conductor: int, p: int, bound: int,
                           rank_data: dict[int, int]) -> list[FieldRecord]:
    """FieldRecords for all fundamental D in [-bound, -1], |D| ascending.

    A record is eligible iff every prime q | conductor splits, p splits,
    and the ingested twist rank is 1; anything else carries an explicit
    ineligibility reason.  Missing rank data never silently passes.
    """
    if bound <= 0:
        return []
    nprimes = _prime_divisors(conductor)
    out = []
    for D in fundamental_discriminants(bound):
        rec = FieldRecord(D)
        rec.p_split = kronecker_symbol(D, p) == 1
        if any(kronecker_symbol(D, q) != 1 for q in nprimes):
            rec.eligibility = INELIGIBLE
            rec.reason = "heegner-hypothesis-fails"
        elif not rec.p_split:
            rec.eligibility = INELIGIBLE
            rec.reason = "p-not-split"
        else:
            rank = rank_data.get(D)
            rec.twist_rank = rank
            if rank is None:
                rec.eligibility = INELIGIBLE
                rec.reason = "unknown-rank"
            elif rank != 1:
                rec.eligibility = INELIGIBLE
                rec.reason = "twist-rank-not-1"
        out.append(rec)
    return out


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out
