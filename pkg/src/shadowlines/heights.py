"""Anticyclotomic height plumbing: ingested pairing values, bilinear
evaluation on integer combinations of the basis points, and
denominator-ideal factorization with a wall-clock budget.

The pairing itself is bilinear and symmetric, vanishes on each conjugation
eigenspace, and pairs the rational basis against the minus-eigenspace
point R.  Everything downstream (slopes, receptacle slopes) only ever
needs values <a*P1 + b*P2, R>, so the evaluator extends ingested base
values <P1, R>, <P2, R> bilinearly.  Computing base values natively is an
optional feature that is off in this build; see anticyclotomic_height.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass, field

from .errors import (
    DuplicateConflict,
    HeightUnavailable,
    ParseError,
    PrecisionMismatch,
    PSplitRequired,
)
from .padic import PadicNumber
from .quadfields import kronecker_symbol

COMPUTED = "computed"
INGESTED = "ingested"

#: Known pair tags in the ingestion format.
PAIR_TAGS = ("P1xR", "P2xR", "Q1xR", "Q2xR")


@dataclass(frozen=True)
class HeightValue:
    """One pairing value with its provenance."""

    value: PadicNumber
    pair: tuple[str, str]
    provenance: str
    precision: int


@dataclass(frozen=True)
class HeightKey:
    label: str
    p: int
    discriminant: int
    pair: str


def _encode_value(v: PadicNumber) -> dict:
    if v.is_exact_zero:
        return {"zero": True}
    return {"valuation": v.val, "unit": v.unit, "precision": v.prec}


def _decode_value(d: dict, p: int) -> PadicNumber:
    if d.get("zero"):
        return PadicNumber.zero(p)
    return PadicNumber(p, int(d["valuation"]), int(d["unit"]), int(d["precision"]))


class HeightStore:
    """Ingested pairing values keyed by (label, p, D, pair tag)."""

    def __init__(self):
        self._values: dict[HeightKey, HeightValue] = {}

    def __len__(self):
        return len(self._values)

    def add(self, key: HeightKey, value: HeightValue):
        old = self._values.get(key)
        if old is not None:
            same = (old.precision == value.precision
                    and old.value.is_exact_zero == value.value.is_exact_zero
                    and (old.value.is_exact_zero
                         or (old.value.val == value.value.val
                             and old.value.unit == value.value.unit)))
            if not same:
                raise DuplicateConflict(f"conflicting ingested values for {key}")
            return
        self._values[key] = value

    def get(self, key: HeightKey) -> HeightValue | None:
        return self._values.get(key)

    def base_values(self, label: str, p: int, D: int):
        h1 = self.get(HeightKey(label, p, D, "P1xR"))
        h2 = self.get(HeightKey(label, p, D, "P2xR"))
        return h1, h2

    def pairs(self):
        return self._values.items()


def ingest_heights(path, min_precision: int = 0) -> HeightStore:
    """Load a heights file: one JSON record per line.

    Record fields: label, p, D, pair (one of P1xR/P2xR/Q1xR/Q2xR),
    valuation, unit, precision (or zero: true).  Bit-exact round-trip with
    export_heights.
    """
    store = HeightStore()
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                key = HeightKey(rec["label"], int(rec["p"]), int(rec["D"]), rec["pair"])
                if key.pair not in PAIR_TAGS:
                    raise ParseError(f"line {lineno}: unknown pair tag {key.pair}")
                value = _decode_value(rec, key.p)
            except (KeyError, ValueError, TypeError) as exc:
                raise ParseError(f"line {lineno} of {path}: {exc}") from exc
            prec = 10 ** 9 if value.is_exact_zero else value.prec
            if prec < min_precision:
                raise PrecisionMismatch(
                    f"line {lineno}: precision {prec} below required {min_precision}")
            store.add(key, HeightValue(value, ("?", "R"), INGESTED,
                                       0 if value.is_exact_zero else value.prec))
    return store


def export_heights(store: HeightStore, path):
    with open(path, "w") as fh:
        for key, hv in sorted(store.pairs(),
                              key=lambda kv: (kv[0].label, kv[0].p,
                                              -kv[0].discriminant, kv[0].pair)):
            rec = {"label": key.label, "p": key.p, "D": key.discriminant,
                   "pair": key.pair}
            rec.update(_encode_value(hv.value))
            fh.write(json.dumps(rec) + "\n")


def pair_against_r(store: HeightStore, label: str, p: int, D: int,
                   combo: tuple[int, int], precision: int) -> HeightValue:
    """<a*P1 + b*P2, R> by bilinear extension of the ingested base values."""
    h1, h2 = store.base_values(label, p, D)
    if h1 is None or h2 is None:
        raise HeightUnavailable(
            f"no ingested base heights for ({label}, {p}, {D})")
    a, b = combo
    v = a * h1.value + b * h2.value
    if not v.is_exact_zero and v.abs_prec < precision:
        raise PrecisionMismatch(
            f"ingested heights for ({label}, {p}, {D}) only reach "
            f"p^{v.abs_prec}, need p^{precision}")
    return HeightValue(v, (f"{a}*P1+{b}*P2", "R"), INGESTED, precision)


def anticyclotomic_height(label: str, p: int, D: int,
                          left_combo: tuple[int, int] | str,
                          precision: int,
                          store: HeightStore | None = None,
                          native: bool = False) -> HeightValue:
    """The pairing of a rational combination against the field's R point.

    The left argument is an integer coefficient vector in the (P1, P2)
    basis (or the string "R"); pairs of rational points return the exact
    zero since the pairing vanishes on the plus eigenspace.  With the
    native feature off, base values must come from an ingested store.
    """
    if kronecker_symbol(D, p) != 1:
        raise PSplitRequired(f"{p} does not split in Q(sqrt({D}))")
    if native:
        raise HeightUnavailable(
            "native height computation is not built; ingest base values "
            "(see ingest_heights) or extend the store")
    if store is None:
        raise HeightUnavailable("no ingested store supplied")
    if left_combo == "R":
        # <R, R> pairs the minus eigenspace against itself: exact zero.
        return HeightValue(PadicNumber.zero(p), ("R", "R"), INGESTED, precision)
    return pair_against_r(store, label, p, D, left_combo, precision)


def eigenspace_pairing(p: int, precision: int) -> HeightValue:
    """<P, Q> for P, Q both rational (or both anti-rational): exact zero."""
    return HeightValue(PadicNumber.zero(p), ("plus", "plus"), COMPUTED, precision)


# ---------------------------------------------------------------------------
# denominator-ideal factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealFactor:
    """A prime of the quadratic field recorded by its rational norm data."""

    q: int               # rational prime under the ideal
    residue: int | None  # root of x^2 = D mod 4q picking the ideal, if split
    exponent: int
    kind: str            # split / inert / ramified


@dataclass
class DenominatorFactorization:
    """Factorization of a denominator-ideal norm, possibly partial."""

    norm: int
    factors: list[IdealFactor] = field(default_factory=list)
    cofactor: int = 1
    elapsed: float = 0.0
    timed_out: bool = False

    def complete(self) -> bool:
        return self.cofactor == 1


def _pollard_rho(n: int, seed: int) -> int:
    if n % 2 == 0:
        return 2
    state = seed | 1
    while True:
        state = (state * 1103515245 + 12345) % (1 << 31)
        c = state % (n - 1) + 1
        x = y = state % n
        d = 1
        f = lambda v: (v * v + c) % n
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factor_denominator(norm: int, D: int, timeout_seconds: float = 600.0,
                       seed: int = 1) -> DenominatorFactorization:
    """Trial division then Pollard rho on the norm, with ideal splitting
    data over Q(sqrt(D)).  Timeout is a result state, never an error."""
    if timeout_seconds <= 0:
        raise ValueError("timeout must be positive")
    start = time.monotonic()
    out = DenominatorFactorization(norm=norm)
    if norm in (0, 1):
        return out
    n = abs(norm)
    counts: dict[int, int] = {}
    for q in range(2, 10 ** 4):
        if q * q > n:
            break
        while n % q == 0:
            counts[q] = counts.get(q, 0) + 1
            n //= q
        if time.monotonic() - start > timeout_seconds:
            out.cofactor = n
            out.timed_out = True
            out.elapsed = time.monotonic() - start
            _fill_factors(out, counts, D)
            return out
    stack = [n] if n > 1 else []
    while stack:
        if time.monotonic() - start > timeout_seconds:
            out.timed_out = True
            out.cofactor = math.prod(stack)
            break
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        d = _pollard_rho(m, seed)
        stack += [d, m // d]
        seed += 1
    out.elapsed = time.monotonic() - start
    _fill_factors(out, counts, D)
    return out


def _fill_factors(out: DenominatorFactorization, counts: dict[int, int], D: int):
    for q in sorted(counts):
        ks = kronecker_symbol(D, q)
        if ks == 1:
            r = _sqrt_mod(D, q)
            out.factors.append(IdealFactor(q, r, counts[q], "split"))
        elif ks == 0:
            out.factors.append(IdealFactor(q, None, counts[q], "ramified"))
        else:
            out.factors.append(IdealFactor(q, None, counts[q], "inert"))


def _sqrt_mod(D: int, q: int) -> int | None:
    if q == 2:
        return D % 2
    from .padic import _tonelli
    return _tonelli(D % q, q)


# ---------------------------------------------------------------------------
# persistent cache
# ---------------------------------------------------------------------------

class HeightCache:
    """Append-only, checksummed cache of resolved pairing values.

    A corrupt record invalidates only itself; readers fall back to
    recomputation and the next write rewrites a clean file.
    """

    def __init__(self, path):
        self.path = path
        self.hits = 0
        self.misses = 0
        self._mem: dict[tuple, dict] = {}
        self._load()

    @staticmethod
    def _checksum(payload: str) -> str:
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def _load(self):
        try:
            fh = open(self.path)
        except FileNotFoundError:
            return
        with fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    body = rec["body"]
                    if self._checksum(json.dumps(body, sort_keys=True)) != rec["sum"]:
                        continue
                    self._mem[self._key(body)] = body
                except (KeyError, ValueError):
                    continue

    @staticmethod
    def _key(body: dict) -> tuple:
        return (body["label"], body["p"], body["D"], body["pair"], body["precision"])

    def lookup(self, label, p, D, pair, precision) -> PadicNumber | None:
        body = self._mem.get((label, p, D, pair, precision))
        if body is None:
            self.misses += 1
            return None
        self.hits += 1
        return _decode_value(body, p)

    def record(self, label, p, D, pair, precision, value: PadicNumber):
        key = (label, p, D, pair, precision)
        if key in self._mem:
            return
        body = {"label": label, "p": p, "D": D, "pair": pair,
                "precision": precision}
        body.update(_encode_value(value))
        self._mem[key] = body
        payload = json.dumps(body, sort_keys=True)
        with open(self.path, "a") as fh:
            fh.write(json.dumps({"sum": self._checksum(payload), "body": body})
                     + "\n")
