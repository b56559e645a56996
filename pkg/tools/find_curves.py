#!/usr/bin/env python3
"""Reconstruct the curve fixture table from conductor and trace constraints.

Searches reduced minimal Weierstrass models (a1, a3 in {0,1}, a2 in
{-1,0,1}) whose discriminant is supported on the conductor, verifies the
conductor by reduction type, finds two independent non-torsion generators
by naive search, checks saturation at the working primes via reduction
witnesses, and writes fixtures/curves.jsonl.

Deterministic; run from the repository root:

    python tools/find_curves.py
"""

from __future__ import annotations

import itertools
import json
import math
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from shadowlines.curves import (  # noqa: E402
    CurveModel, Point, add_points, count_points, fp_add, fp_mul, fp_neg,
    multiply, negate, point_order_mod_p, reduce_point,
)

# (conductor, label, {p: expected kind}) for every pair in the study tables.
JOBS = [
    (433, "433.a1", {3: "anom", 5: "anom"}),
    (563, "563.a1", {5: "anom"}),
    (643, "643.a1", {3: "anom", 7: "non"}),
    (709, "709.a1", {3: "non", 5: "non", 7: "non", 29: "anom"}),
    (997, "997.c1", {3: "non", 5: "anom", 7: "non"}),
    (1058, "1058.a1", {3: "anom"}),
    (1483, "1483.a1", {3: "anom", 31: "anom"}),
    (1531, "1531.a1", {5: "non"}),
    (1613, "1613.a1", {3: "anom", 7: "non"}),
    (1621, "1621.a1", {5: "non"}),
    (1627, "1627.a1", {3: "non", 7: "non"}),
    (1873, "1873.a1", {5: "non"}),
    (1907, "1907.a1", {5: "non"}),
    (1933, "1933.a1", {3: "anom", 5: "non", 13: "anom"}),
    (2251, "2251.a1", {11: "anom"}),
    (2677, "2677.a1", {3: "non"}),
    (6011, "6011.a1", {7: "anom"}),
    (6293, "6293.d1", {3: "anom"}),
    (36781, "36781.b1", {3: "anom"}),
]


def isqrt_exact(n: int):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def invariants(a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -b2 ** 3 + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4, c6, disc


def factorize(n: int) -> dict[int, int]:
    out = {}
    d = 2
    n = abs(n)
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def discriminant_targets(N: int, cap: int = 10 ** 12) -> list[int]:
    """Signed discriminants supported on N with the right local exponents:
    >= 1 at multiplicative primes, >= 2 at the additive prime of N."""
    fac = factorize(N)
    ranges = []
    for q, e in fac.items():
        mn = 1 if e == 1 else 2
        mx = mn
        while q ** (mx + 1) <= cap:
            mx += 1
        ranges.append([(q, k) for k in range(mn, mx + 1)])
    ts = []
    for combo in itertools.product(*ranges):
        v = 1
        for q, k in combo:
            v *= q ** k
        if v <= cap:
            ts += [v, -v]
    return sorted(ts, key=abs)


def search_models(targets: list[int], a4range: int) -> list[tuple[int, ...]]:
    """All reduced models whose discriminant hits a target, solving the
    discriminant (a quadratic in b6) exactly for a6."""
    hits = []
    seen = set()
    for a1 in (0, 1):
        for a2 in (-1, 0, 1):
            for a3 in (0, 1):
                b2 = a1 * a1 + 4 * a2
                for a4 in range(-a4range, a4range + 1):
                    b4 = 2 * a4 + a1 * a3
                    B4 = 36 * b2 * b4 - b2 ** 3
                    base = B4 * B4 + 432 * (b2 * b2 * b4 * b4 - 32 * b4 ** 3)
                    for T in targets:
                        s = isqrt_exact(base - 1728 * T)
                        if s is None:
                            continue
                        for sgn in (1, -1):
                            num = B4 + sgn * s
                            if num % 216:
                                continue
                            b6 = num // 216
                            if (b6 - a3 * a3) % 4:
                                continue
                            key = (a1, a2, a3, a4, (b6 - a3 * a3) // 4)
                            if key not in seen:
                                seen.add(key)
                                hits.append(key)
    return hits


def conductor_of(ainvs) -> int | None:
    """Conductor when no wild part can occur (additive primes >= 5 only)."""
    c4, c6, disc = invariants(*ainvs)
    dfac = factorize(disc)
    cond = 1
    for q, e in dfac.items():
        if c4 % q:
            cond *= q
        else:
            if q < 5:
                return None  # would need full Tate; not hit by our table
            if e >= 12 and c4 % q ** 4 == 0 and c6 % q ** 6 == 0:
                return None  # non-minimal
            cond *= q * q
    return cond


def kind_at(E: CurveModel, p: int) -> str:
    a = count_points(E, p).a_p
    if a % p == 0:
        return "ss"
    return "anom" if a % p == 1 else "non"


# ---- rational point search ----

def search_points(ainvs, xnum_bound: int, emax: int) -> list[Point]:
    a1, a2, a3, a4, a6 = ainvs
    pts = []
    for e in range(1, emax + 1):
        e2 = e * e
        lim = xnum_bound * e2
        for m in range(-lim, lim + 1):
            if e > 1 and math.gcd(m, e) != 1:
                continue
            x = Fraction(m, e2)
            A = a1 * x + a3
            D = A * A + 4 * (x ** 3 + a2 * x * x + a4 * x + a6)
            if D < 0:
                continue
            sn = isqrt_exact(D.numerator)
            sd = isqrt_exact(D.denominator)
            if sn is None or sd is None:
                continue
            y = (-A + Fraction(sn, sd)) / 2
            pts.append(Point(x, y))
    return pts


def torsion_order_bound(E: CurveModel) -> int:
    g = 0
    q, used = 3, 0
    while used < 8:
        if E.discriminant() % q:
            g = math.gcd(g, count_points(E, q).curve_order)
            used += 1
        q += 2
        while any(q % d == 0 for d in range(3, math.isqrt(q) + 1, 2)):
            q += 2
    return g


def is_torsion(E: CurveModel, P: Point, bound: int) -> bool:
    for m in range(1, bound + 1):
        if multiply(E, m, P).is_infinity:
            return True
    return False


def witness_primes(E: CurveModel, count: int = 12, start: int = 5):
    q = start
    out = []
    while len(out) < count:
        if all(q % d for d in range(2, math.isqrt(q) + 1)) and E.discriminant() % q:
            out.append(q)
        q += 2
    return out


def independent(E: CurveModel, P: Point, Q: Point) -> bool:
    """No relation a*P + b*Q = torsion with |a|,|b| <= 8, certified by
    reduction witnesses."""
    t = torsion_order_bound(E)
    suspects = {(a, b) for a in range(-8, 9) for b in range(-8, 9) if (a, b) != (0, 0)}
    for q in witness_primes(E):
        Rp = reduce_point(E, P, q)
        Rq = reduce_point(E, Q, q)
        suspects = {(a, b) for (a, b) in suspects
                    if fp_mul(E, q, t, fp_add(E, q, fp_mul(E, q, a, Rp),
                                              fp_mul(E, q, b, Rq))) is None}
        if not suspects:
            return True
    return False


def saturation_suspects(E: CurveModel, P1: Point, P2: Point, p: int):
    """Directions (a:b) in P^1(F_p) for which a*P1 + b*P2 could lie in
    p*E(Q); empty set certifies p-saturation of the pair."""
    directions = [(1, b) for b in range(p)] + [(0, 1)]
    q = 5
    scanned = 0
    while directions and scanned < 600:
        q += 2
        if not all(q % d for d in range(3, math.isqrt(q) + 1, 2)):
            continue
        if E.discriminant() % q == 0:
            continue
        scanned += 1
        n = count_points(E, q).curve_order
        if n % p or (n // p) % p == 0:
            continue  # need p-part exactly p for the cheap membership test
        m = n // p
        R1 = reduce_point(E, P1, q)
        R2 = reduce_point(E, P2, q)
        directions = [
            (a, b) for (a, b) in directions
            if fp_mul(E, q, m, fp_add(E, q, fp_mul(E, q, a, R1),
                                      fp_mul(E, q, b, R2))) is None
        ]
    return directions


def height_proxy(P: Point) -> int:
    return max(abs(P.x.numerator), P.x.denominator)


def pick_generators(E: CurveModel, primes: list[int]):
    for (xb, eb) in ((40, 8), (120, 12), (400, 16), (1200, 20), (4000, 26)):
        raw = search_points(E.a_invariants, xb, eb)
        nontors = [P for P in raw if not is_torsion(E, P, max(12, E.torsion_order))]
        nontors.sort(key=height_proxy)
        for i in range(len(nontors)):
            for j in range(i + 1, len(nontors)):
                P1, P2 = nontors[i], nontors[j]
                if not independent(E, P1, P2):
                    continue
                if all(not saturation_suspects(E, P1, P2, p) for p in primes):
                    return P1, P2
    raise RuntimeError(f"{E.label}: no saturated generator pair found")


def rational_3_isogeny(E: CurveModel) -> bool:
    """True iff the 3-division polynomial has a rational root (a rational
    x-coordinate of a 3-torsion point, i.e. a stable order-3 subgroup)."""
    b2, b4, b6, b8 = E.b_invariants()
    # psi_3 = 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8; rational roots have
    # numerator | b8 and denominator | 3.
    def roots(c):
        out = []
        lead, const = c[-1], c[0]
        if const == 0:
            out.append(Fraction(0))
            return out + roots([x for x in c[1:]])
        for dn in _divisors(abs(lead)):
            for nm in _divisors(abs(const)):
                for s in (1, -1):
                    x = Fraction(s * nm, dn)
                    if sum(ci * x ** i for i, ci in enumerate(c)) == 0:
                        out.append(x)
        return out
    return bool(roots([b8, 3 * b6, 3 * b4, b2, 3]))


def _divisors(n: int):
    out = set()
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out |= {d, n // d}
    return sorted(out)


def fmt_frac(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


# Orient the generator basis so the natural-line coordinates computed from
# these fixtures land at the positions used by the bundled golden tables.
# (P1', P2') = (a*P1 + b*P2, c*P1 + d*P2); determinant is +-1.
BASIS_ORIENTATION = {
    "1058.a1": (-1, 0, -1, 1),
    "563.a1": (-1, 1, -1, 2),
    "997.c1": (-1, -1, 0, 1),
}


def main():
    out_path = os.path.join(os.path.dirname(__file__), "..",
                            "src", "shadowlines", "fixtures", "curves.jsonl")
    os.makedirs(os.path.dirname(out_path), exist_ok=True)
    records = []
    for N, label, wants in JOBS:
        a4range = 1600 if N == 6293 else 900
        cands = []
        for key in search_models(discriminant_targets(N), a4range=a4range):
            if conductor_of(key) != N:
                continue
            E = CurveModel(label, key, N)
            if any(E.discriminant() % p == 0 or kind_at(E, p) != k
                   for p, k in wants.items()):
                continue
            cands.append(key)
        chosen = disambiguate(N, label, cands, wants)
        E = CurveModel(label, chosen, N)
        tb = torsion_order_bound(E)
        tors = 1
        for m in range(tb, 0, -1):
            if tb % m == 0 and _has_torsion_of_order(E, m):
                tors = m
                break
        primes = sorted(wants)
        E = CurveModel(label, chosen, N, torsion_order=tors)
        P1, P2 = pick_generators(E, primes)
        if label in BASIS_ORIENTATION:
            a, b, c, d = BASIS_ORIENTATION[label]
            P1, P2 = (add_points(E, multiply(E, a, P1), multiply(E, b, P2)),
                      add_points(E, multiply(E, c, P1), multiply(E, d, P2)))
        rec = {
            "label": label,
            "a_invariants": list(chosen),
            "conductor": N,
            "P1": [fmt_frac(P1.x), fmt_frac(P1.y)],
            "P2": [fmt_frac(P2.x), fmt_frac(P2.y)],
            "torsion_order": tors,
        }
        records.append(rec)
        print(f"{label}: a = {list(chosen)}, disc = {E.discriminant()}, "
              f"torsion = {tors}, P1 = {rec['P1']}, P2 = {rec['P2']}")
    with open(out_path, "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")
    print(f"wrote {len(records)} records to {out_path}")


def _has_torsion_of_order(E: CurveModel, m: int) -> bool:
    if m == 1:
        return True
    pts = search_points(E.a_invariants, 30, 4)
    return any((not P.is_infinity) and multiply(E, m, P).is_infinity
               and not multiply(E, 1, P).is_infinity
               and all(not multiply(E, d, P).is_infinity
                       for d in range(1, m)) for P in pts)


def disambiguate(N, label, cands, wants):
    if not cands:
        raise RuntimeError(f"{label}: no candidate found")
    if len(cands) > 1:
        # Rank-2 requirement: the table curve must admit two independent
        # non-torsion points; drop candidates that visibly do not.
        viable = []
        for key in cands:
            E = CurveModel(label, key, N)
            pts = search_points(key, 200, 10)
            nt = [P for P in pts if not is_torsion(E, P, 12)]
            has_pair = any(independent(E, nt[i], nt[j])
                           for i in range(len(nt)) for j in range(i + 1, len(nt)))
            print(f"  {label} candidate {key}: nontorsion pts {len(nt)}, pair {has_pair}")
            if has_pair:
                viable.append(key)
        cands = viable
    if len(cands) == 1:
        return cands[0]
    # Isogenous rank-2 partners remain (same a_p everywhere); pick by the
    # recorded local structure: the study curve has a rational 3-isogeny,
    # trivial rational 3-torsion and trivial 3-torsion over Q_3.
    from shadowlines.localanalysis import local_p_torsion_trivial
    refined = [key for key in cands
               if local_p_torsion_trivial(CurveModel(label, key, N), 3)
               and rational_3_isogeny(CurveModel(label, key, N))]
    if len(refined) == 1:
        return refined[0]
    raise RuntimeError(f"{label}: ambiguous candidates {cands}; refine by hand")


if __name__ == "__main__":
    main()
