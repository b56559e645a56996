"""Bucketed slope distributions, filters, and uniformity statistics.

All statistics are exact: integer bucket counts, rational chi-square,
percent-lost rendered to one decimal from exact counts.  Reports are
deterministic functions of the record multiset; rebuilding from a shuffled
stream yields identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InconclusivePrecision, InsufficientPrecision
from .padic import ProjectiveSlope, slope_bucket
from .shadow import DistinguishedLine, NaturalLine, distinguished_line


@dataclass
class FieldSlope:
    """One field's contribution to a distribution run."""

    discriminant: int
    slope: ProjectiveSlope | None = None          # basis slope s
    receptacle_slope: ProjectiveSlope | None = None  # s' when a transform applies
    skip_reason: str | None = None
    class_number: int | None = None
    r_locally_divisible: bool | None = None       # None = not evaluated


@dataclass(frozen=True)
class FilterOutcome:
    discriminant: int
    class_number_coprime_p: bool | None
    r_not_locally_p_divisible: bool | None
    reason: str | None

    @property
    def passes(self) -> bool:
        return bool(self.class_number_coprime_p) and bool(self.r_not_locally_p_divisible)


@dataclass
class DistributionReport:
    p: int
    level: int
    counts: list[int]
    sub_counts: dict[int, list[int]] | None
    attempted: int
    skipped: dict[str, int]
    mode: DistinguishedLine
    chi_square: Fraction
    df: int
    min_distinguishing_n: int | None = None

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def percent_lost(self) -> str:
        lost = sum(self.skipped.values())
        if self.attempted == 0:
            return "0.0"
        tenths = (1000 * lost + self.attempted // 2) // self.attempted
        return f"{tenths // 10}.{tenths % 10}"


def chi_square_uniformity(counts: list[int]) -> tuple[Fraction, int]:
    """Pearson chi-square against the uniform law over the buckets.

    Returns the exact rational statistic and the degrees of freedom; no
    p-values are attached, interpretation is left to the reader.
    """
    total = sum(counts)
    k = len(counts)
    if total == 0 or k == 0:
        raise ValueError("empty distribution")
    expected = Fraction(total, k)
    stat = sum((c - expected) ** 2 / expected for c in counts)
    return stat, k - 1


def build_distribution(records: list[FieldSlope], p: int, level: int = 1,
                       use_receptacle_slope: bool = False,
                       dominance: Fraction = Fraction(3, 2)) -> DistributionReport:
    """Bucket counts in the order (0,1), ..., (p-1,1), (1,0).

    Level 2 additionally returns, per level-1 bucket, the distribution of
    the next digit of the informative entry (first entry off (1,0), second
    entry on it).  Skipped records count toward attempted and percent lost.
    """
    counts = [0] * (p + 1)
    sub: dict[int, list[int]] = {}
    skipped: dict[str, int] = {}
    attempted = 0
    for rec in sorted(records, key=lambda r: (-r.discriminant)):
        attempted += 1
        slope = rec.receptacle_slope if use_receptacle_slope else rec.slope
        if slope is None:
            reason = rec.skip_reason or "missing-slope"
            skipped[reason] = skipped.get(reason, 0) + 1
            continue
        if slope.abs_prec < level:
            raise InsufficientPrecision(
                f"slope for D={rec.discriminant} not known mod {p}^{level}")
        b = slope_bucket(slope, 1)
        counts[b] += 1
        if level >= 2:
            digits = slope_bucket(slope, 2)
            sub.setdefault(b, [0] * p)[digits[1]] += 1
    stat, df = (Fraction(0), p) if sum(counts) == 0 else chi_square_uniformity(counts)
    return DistributionReport(
        p=p, level=level, counts=counts, sub_counts=sub if level >= 2 else None,
        attempted=attempted, skipped=skipped,
        mode=distinguished_line(counts, dominance), chi_square=stat, df=df)


def apply_filters(records: list[FieldSlope], p: int) -> tuple[list[FieldSlope],
                                                              list[FilterOutcome]]:
    """Restrict to fields with p coprime to the class number and R not
    locally p-divisible.  Records must carry class_number and the
    divisibility flag (or None when it could not be evaluated, which
    excludes the field with an explicit reason)."""
    kept = []
    outcomes = []
    for rec in sorted(records, key=lambda r: -r.discriminant):
        if rec.class_number is None:
            outcomes.append(FieldOutcome_inconclusive(rec, "missing-class-number"))
            continue
        cn_ok = rec.class_number % p != 0
        if rec.r_locally_divisible is None:
            outcomes.append(FilterOutcome(rec.discriminant, cn_ok, None,
                                          "divisibility-inconclusive"))
            continue
        div_ok = not rec.r_locally_divisible
        # attribution order mirrors the elimination summary: divisibility
        # first, class number among the divisibility survivors
        reason = None
        if not div_ok:
            reason = "r-locally-divisible"
        elif not cn_ok:
            reason = "class-number-divisible"
        outcomes.append(FilterOutcome(rec.discriminant, cn_ok, div_ok, reason))
        if cn_ok and div_ok:
            kept.append(rec)
    return kept, outcomes


def FieldOutcome_inconclusive(rec: FieldSlope, reason: str) -> FilterOutcome:
    return FilterOutcome(rec.discriminant, None, None, reason)


def filter_elimination_summary(outcomes: list[FilterOutcome]) -> dict[str, int]:
    """How many fields each filter removed, in evaluation order: local
    divisibility first, class number among the divisibility survivors."""
    out = {"total": len(outcomes), "r-locally-divisible": 0,
           "class-number-divisible": 0, "inconclusive": 0, "passed": 0}
    for oc in outcomes:
        if oc.r_not_locally_p_divisible is None or oc.class_number_coprime_p is None:
            out["inconclusive"] += 1
        elif not oc.r_not_locally_p_divisible:
            out["r-locally-divisible"] += 1
        elif not oc.class_number_coprime_p:
            out["class-number-divisible"] += 1
        else:
            out["passed"] += 1
    return out


def compare_lines(natural: NaturalLine, distinguished: DistinguishedLine,
                  p: int) -> str:
    """Equality of the two mod-p lines: 'equal', 'different', 'undefined'."""
    if not natural.defined or not distinguished.determined:
        return "undefined"
    return "equal" if natural.bucket(p) == distinguished.bucket else "different"
