"""E over Qp: formal group logarithm, the map to pZp/p^2Zp, local torsion
and divisibility tests, and the unit Frobenius eigenvalue.

The formal power series are computed once per curve with exact rational
coefficients (from the invariant differential, by power-series inversion)
and then specialized p-adically, so one series computation serves every
prime considered for that curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveModel, Point, INFINITY, _add_raw, count_points, \
    point_order_mod_p, GOOD_SUPERSINGULAR
from .errors import (
    InconclusivePrecision,
    NotInFormalRange,
    PrecisionExhausted,
    SupersingularInput,
)
from .padic import PadicNumber

#: Extra Hensel depth allowed before a divisibility question is abandoned.
HENSEL_EXTRA_DEPTH = 6


# ---------------------------------------------------------------------------
# power series with exact rational coefficients
# ---------------------------------------------------------------------------

def _ser_mul(a, b, deg):
    out = [Fraction(0)] * (deg + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > deg:
            continue
        for j, bj in enumerate(b):
            if i + j > deg:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def _ser_inv(a, deg):
    # a[0] must be a unit of Q
    out = [Fraction(0)] * (deg + 1)
    out[0] = 1 / Fraction(a[0])
    for n in range(1, deg + 1):
        s = Fraction(0)
        for k in range(1, min(n, len(a) - 1) + 1):
            s += Fraction(a[k]) * out[n - k]
        out[n] = -s * out[0]
    return out


def _ser_compose(a, b, deg):
    # a(b(t)) with b[0] == 0
    out = [Fraction(0)] * (deg + 1)
    power = [Fraction(0)] * (deg + 1)
    power[0] = Fraction(1)
    for k, ak in enumerate(a):
        if k > deg:
            break
        if ak:
            for i, c in enumerate(power):
                out[i] += ak * c
        power = _ser_mul(power, b, deg)
    return out


class FormalGroupData:
    """Formal log/exp of a curve, carried to a requested series degree."""

    def __init__(self, E: CurveModel):
        self.E = E
        self._degree = 0
        self._log = None
        self._exp = None

    def ensure_degree(self, deg: int):
        if deg <= self._degree:
            return
        deg = max(deg, 8)
        a1, a2, a3, a4, a6 = (Fraction(a) for a in self.E.a_invariants)
        # w(t) = t^3 + ... solves the Weierstrass equation in (t, w)
        # coordinates t = -x/y, w = -1/y.
        w = [Fraction(0)] * (deg + 4)
        w[3] = Fraction(1)
        for _ in range(deg + 2):
            w2 = _ser_mul(w, w, deg + 3)
            w3 = _ser_mul(w2, w, deg + 3)
            new = [Fraction(0)] * (deg + 4)
            new[3] = Fraction(1)
            for i in range(deg + 4):
                acc = Fraction(0)
                if i >= 1:
                    acc += a1 * w[i - 1]
                if i >= 2:
                    acc += a2 * w[i - 2]
                acc += a3 * w2[i] if i < len(w2) else 0
                if i >= 1 and i - 1 < len(w2):
                    acc += a4 * w2[i - 1]
                acc += a6 * w3[i] if i < len(w3) else 0
                new[i] = (Fraction(1) if i == 3 else Fraction(0)) + acc
            if new == w:
                break
            w = new
        # x = t/w = t^-2 * v, y = -1/w = -t^-3 * v with v = 1/(w/t^3).
        u = [w[i + 3] for i in range(deg + 1)]
        v = _ser_inv(u, deg)
        # x = t^-2 v, y = -t^-3 v; both dx/dt and 2y + a1 x + a3 carry a
        # common factor t^-3, leaving power series:
        # omega/dt = (-2v + t v') / (-2v + a1 t v + a3 t^3), constant term 1.
        num = [Fraction(0)] * (deg + 1)
        den = [Fraction(0)] * (deg + 1)
        for i in range(deg + 1):
            num[i] = (i - 2) * v[i]
            den[i] = -2 * v[i] + (a1 * v[i - 1] if i >= 1 else 0) \
                + (a3 if i == 3 else 0)
        ratio = _ser_mul(num, _ser_inv(den, deg), deg)
        log = [Fraction(0)] * (deg + 2)
        for i in range(deg + 1):
            log[i + 1] = ratio[i] / (i + 1)
        # exp is the compositional inverse: fix coefficients degree by degree.
        exp = [Fraction(0)] * (deg + 2)
        exp[1] = Fraction(1)
        for n in range(2, deg + 2):
            comp = _ser_compose(log, exp, n)
            exp[n] = -comp[n]
        self._log, self._exp, self._degree = log, exp, deg

    def log_coefficients(self, deg: int):
        self.ensure_degree(deg)
        return self._log[: deg + 1]

    def exp_coefficients(self, deg: int):
        self.ensure_degree(deg)
        return self._exp[: deg + 1]


_FORMAL_CACHE: dict[tuple, FormalGroupData] = {}


def formal_group(E: CurveModel) -> FormalGroupData:
    key = (E.label, E.a_invariants)
    if key not in _FORMAL_CACHE:
        _FORMAL_CACHE[key] = FormalGroupData(E)
    return _FORMAL_CACHE[key]


# ---------------------------------------------------------------------------
# local points
# ---------------------------------------------------------------------------

def padic_point(E: CurveModel, P: Point, p: int, prec: int) -> Point:
    """The image of a rational point in E(Qp) at the given precision."""
    if P.is_infinity:
        return INFINITY
    return Point(PadicNumber.from_rational(Fraction(P.x), p, prec),
                 PadicNumber.from_rational(Fraction(P.y), p, prec))


def padic_add(E: CurveModel, P: Point, Q: Point) -> Point:
    """Group law over Qp; coordinate ties are decided at available precision."""
    return _add_raw(E.a_invariants, P, Q,
                    lambda v: getattr(v, "is_zero_like", False) or
                    (isinstance(v, int) and v == 0))


def padic_mul(E: CurveModel, n: int, P: Point) -> Point:
    if n < 0:
        a1, _, a3, _, _ = E.a_invariants
        return padic_mul(E, -n, Point(P.x, -P.y - a1 * P.x - a3)) \
            if not P.is_infinity else INFINITY
    R = INFINITY
    Q = P
    while n:
        if n & 1:
            R = padic_add(E, R, Q)
        n >>= 1
        if n:
            Q = padic_add(E, Q, Q)
    return R


def formal_parameter(P: Point) -> PadicNumber:
    """t = -x/y for a local point; exact zero for the identity."""
    if P.is_infinity:
        raise ValueError("identity has parameter 0; handle it before calling")
    return -P.x / P.y


def in_formal_range(P: Point) -> bool:
    """Whether P lies in the formal group (reduces to the identity)."""
    if P.is_infinity:
        return True
    return (not P.x.is_zero_like) and P.x.valuation < 0


# ---------------------------------------------------------------------------
# formal logarithm and exponential
# ---------------------------------------------------------------------------

def _log_degree(p: int, n: int) -> int:
    # term m: val >= m - log_p(m); add a small safety margin
    deg = n + 2
    while deg - int(math.log(deg, p)) < n + 1:
        deg += 1
    return deg + 2


def _exp_degree(p: int, n: int) -> int:
    # v_p(m!) <= (m-1)/(p-1)
    return (n * (p - 1) + (p - 3)) // (p - 2) + 4 if p > 3 else 2 * n + 5


def _eval_series(coeffs, t: PadicNumber, p: int, n: int) -> PadicNumber:
    acc = PadicNumber.zero(p)
    power = PadicNumber.from_int(1, p, n + 4)
    for m in range(1, len(coeffs)):
        power = power * t
        c = coeffs[m]
        if c:
            acc = acc + power * PadicNumber.from_rational(c, p, n + 4)
    return acc


def formal_log(E: CurveModel, p: int, P, precision: int) -> PadicNumber:
    """log of the formal parameter of P, to absolute precision p^precision.

    P may be a local Point in the formal range or a PadicNumber parameter t.
    """
    if isinstance(P, Point):
        if P.is_infinity:
            return PadicNumber.zero(p)
        if not in_formal_range(P):
            raise NotInFormalRange("point does not reduce to the identity")
        t = formal_parameter(P)
    else:
        t = P
    if t.is_exact_zero:
        return PadicNumber.zero(p)
    if t.is_zero_like or t.valuation < 1:
        raise NotInFormalRange("parameter is not in pZp")
    if t.abs_prec < precision:
        raise PrecisionExhausted(
            f"parameter known mod p^{t.abs_prec}, need p^{precision}")
    deg = _log_degree(p, precision)
    return _eval_series(formal_group(E).log_coefficients(deg), t, p, precision)


def formal_exp(E: CurveModel, p: int, t: PadicNumber, precision: int) -> PadicNumber:
    """Inverse of the formal logarithm on pZp."""
    if t.is_exact_zero:
        return PadicNumber.zero(p)
    if t.is_zero_like or t.valuation < 1:
        raise NotInFormalRange("exp only converges on pZp for odd p")
    deg = _exp_degree(p, precision)
    return _eval_series(formal_group(E).exp_coefficients(deg), t, p, precision)


def phi_map(E: CurveModel, p: int, P: Point) -> PadicNumber:
    """-x(P)/y(P) reduced into pZp/p^2Zp, the residue of the formal parameter.

    Realizes the isomorphism of the reduction kernel tensored with F_p onto
    pZp/p^2Zp; the identity maps to 0.
    """
    if P.is_infinity:
        return PadicNumber.zero(p)
    if not in_formal_range(P):
        raise NotInFormalRange("phi is defined on the reduction kernel only")
    t = formal_parameter(P)
    if t.abs_prec < 2:
        raise PrecisionExhausted("parameter not known mod p^2")
    r = t.residue(2)
    return PadicNumber.from_int(r, p, 2) if r else PadicNumber.inexact_zero(p, 2)


def extended_log(E: CurveModel, p: int, P: Point, precision: int) -> PadicNumber:
    """The logarithm extended to all of E(Qp) good reduction: log(mP)/m.

    m is the order of the reduction of P; the result is independent of the
    choice of multiplier killing the reduction.
    """
    if P.is_infinity:
        return PadicNumber.zero(p)
    if isinstance(P.x, Fraction) or isinstance(P.x, int):
        m, _ = point_order_mod_p(E, P, p)
        local = padic_point(E, P, p, precision + 2 * _mul_guard(E, p, m))
    else:
        local = P
        m = _local_reduction_order(E, p, local)
    mP = padic_mul(E, m, local)
    if mP.is_infinity:
        return PadicNumber.zero(p)
    raw = formal_log(E, p, mP, precision + padic_valuation_int(m, p))
    return raw / PadicNumber.from_int(m, p, raw.prec if raw.prec else 1)


def padic_valuation_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _mul_guard(E: CurveModel, p: int, m: int) -> int:
    # Digits lost by computing m*P through the chord-tangent law are bounded
    # by the p-part of intermediate denominators; a small fixed pad suffices
    # for the group orders (<= 2p) involved here.
    return padic_valuation_int(m, p) + 3


def _local_reduction_order(E: CurveModel, p: int, P: Point) -> int:
    if in_formal_range(P):
        return 1
    n = count_points(E, p).curve_order
    x0 = P.x.residue(1)
    y0 = P.y.residue(1)
    from .curves import fp_mul
    order = n
    for q in _prime_factors(n):
        while order % q == 0 and fp_mul(E, p, order // q, (x0, y0)) is None:
            order //= q
    return order


def _prime_factors(n: int) -> list[int]:
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


# ---------------------------------------------------------------------------
# division polynomials (x-only form)
# ---------------------------------------------------------------------------

def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)]


def _poly_scale(a, c):
    return [c * ai for ai in a]


def _poly_trim(a):
    while len(a) > 1 and a[-1] == 0:
        a = a[:-1]
    return a


def _poly_divexact(a, b):
    # exact division of integer polynomials (remainder must vanish)
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        q, r = divmod(a[i + len(b) - 1], b[-1])
        if r:
            raise ArithmeticError("inexact polynomial division")
        out[i] = q
        for j, bj in enumerate(b):
            a[i + j] -= q * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


class DivisionPolynomials:
    """psi_m in x-only form: psi_m = poly * psi_2^e with psi_2^2 eliminated.

    Pairs (poly, e) with e in {0, 1} multiply with the substitution
    psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
    """

    def __init__(self, E: CurveModel):
        b2, b4, b6, b8 = E.b_invariants()
        self.S = [b6, 2 * b4, b2, 4]
        self._cache = {
            1: ([1], 0),
            2: ([1], 1),
            3: ([b8, 3 * b6, 3 * b4, b2, 3], 0),
            4: ([b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6,
                 5 * b4, b2, 2], 1),
        }
        self._cache[0] = ([0], 0)
        self._mult_cache: dict[int, tuple] = {}
        self._reduced_cache: dict[tuple, tuple] = {}

    def _mul(self, A, B):
        (pa, ea), (pb, eb) = A, B
        poly = _poly_mul(pa, pb)
        e = ea + eb
        while e >= 2:
            poly = _poly_mul(poly, self.S)
            e -= 2
        return (_poly_trim(poly), e)

    def _sub(self, A, B):
        (pa, ea), (pb, eb) = A, B
        if ea != eb:
            raise ArithmeticError("parity mismatch in psi recurrence")
        return (_poly_trim(_poly_add(pa, _poly_scale(pb, -1))), ea)

    def psi(self, m: int):
        if m < 0:
            poly, e = self.psi(-m)
            return (_poly_scale(poly, -1), e)
        if m in self._cache:
            return self._cache[m]
        if m % 2:
            k = (m - 1) // 2
            a = self._mul(self.psi(k + 2), self._mul(self.psi(k), self._mul(self.psi(k), self.psi(k))))
            b = self._mul(self.psi(k - 1), self._mul(self.psi(k + 1), self._mul(self.psi(k + 1), self.psi(k + 1))))
            out = self._sub(a, b)
        else:
            k = m // 2
            t1 = self._mul(self.psi(k + 2), self._mul(self.psi(k - 1), self.psi(k - 1)))
            t2 = self._mul(self.psi(k - 2), self._mul(self.psi(k + 1), self.psi(k + 1)))
            num = self._mul(self.psi(k), self._sub(t1, t2))
            poly, e = num
            if e >= 1:
                out = (poly, e - 1)
            else:
                out = (_poly_divexact(poly, self.S), 1)
        self._cache[m] = out
        return out

    def psi_x(self, m: int) -> list[int]:
        """psi_m as a pure x-polynomial; m must be odd."""
        poly, e = self.psi(m)
        if e:
            raise ValueError("psi_m is not x-only for even m")
        return poly

    def mult_by_m_numerator(self, m: int) -> list[int]:
        """phi_m = x * psi_m^2 - psi_{m+1} psi_{m-1}, x-only for odd m."""
        if m in self._mult_cache:
            return self._mult_cache[m][0]
        pm, e = self.psi(m)
        sq = self._mul((pm, e), (pm, e))
        xsq = _poly_trim([0] + sq[0])
        prod = self._mul(self.psi(m + 1), self.psi(m - 1))
        if prod[1] != 0 or sq[1] != 0:
            raise ArithmeticError("parity bookkeeping failed")
        phi = _poly_trim(_poly_add(xsq, _poly_scale(prod[0], -1)))
        self._mult_cache[m] = (phi, sq[0])
        return phi

    def psi_squared(self, m: int) -> list[int]:
        """psi_m^2 as a pure x-polynomial."""
        self.mult_by_m_numerator(m)
        return self._mult_cache[m][1]

    def reduced_mult_data(self, m: int, mod: int):
        """(phi_m mod, psi_m^2 mod) with coefficients reduced once per mod."""
        key = (m, mod)
        if key not in self._reduced_cache:
            phi = self.mult_by_m_numerator(m)
            sq = self.psi_squared(m)
            self._reduced_cache[key] = ([c % mod for c in phi],
                                        [c % mod for c in sq])
        return self._reduced_cache[key]


_DIVPOLY_CACHE: dict[tuple, DivisionPolynomials] = {}


def division_polynomials(E: CurveModel) -> DivisionPolynomials:
    key = (E.label, E.a_invariants)
    if key not in _DIVPOLY_CACHE:
        _DIVPOLY_CACHE[key] = DivisionPolynomials(E)
    return _DIVPOLY_CACHE[key]


# ---------------------------------------------------------------------------
# Zp root finding
# ---------------------------------------------------------------------------

def _poly_eval_mod(f, x, mod):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % mod
    return acc


def _poly_derive(f):
    return [i * f[i] for i in range(1, len(f))]


def zp_roots(f: list[int], p: int, n: int, max_depth: int | None = None):
    """Approximate the Zp-roots of an integer polynomial.

    Returns (certified, ambiguous): `certified` lists residues mod p^n, one
    for each Zp-root that Hensel's lemma pins down uniquely; `ambiguous` is
    True when some residue class could not be resolved within the allowed
    recursion depth, in which case absence of roots must not be concluded.
    """
    if max_depth is None:
        max_depth = n + HENSEL_EXTRA_DEPTH
    f = _poly_trim([c for c in f])
    if all(c == 0 for c in f):
        return [], True
    certified = []
    ambiguous = False
    fp = _poly_derive(f)
    for r0 in range(p):
        if _poly_eval_mod(f, r0, p) != 0:
            continue
        if _poly_eval_mod(fp, r0, p) != 0:
            certified.append(_newton_lift(f, fp, r0, p, n))
            continue
        if max_depth <= 0:
            ambiguous = True
            continue
        # singular residue: recurse on f(r0 + p*t) / p^s
        g = _shift_scale(f, r0, p)
        s = min(padic_valuation_int(c, p) if c else n + max_depth + 1 for c in g)
        if s > n + max_depth:
            ambiguous = True
            continue
        g = [c // p ** s for c in g]
        sub_certified, sub_amb = zp_roots(g, p, max(n - 1, 1), max_depth - s)
        ambiguous = ambiguous or sub_amb
        for t in sub_certified:
            certified.append((r0 + p * t) % p ** n)
    return certified, ambiguous


def _newton_lift(f, fp, r, p, n):
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = p ** k
        fr = _poly_eval_mod(f, r, mod)
        dr = _poly_eval_mod(fp, r, mod)
        r = (r - fr * pow(dr, -1, mod)) % mod
    return r % p ** n


def _shift_scale(f, r0, p):
    # coefficients of f(r0 + p*t) as a polynomial in t
    n = len(f)
    out = [0] * n
    # binomial expansion via synthetic composition
    # f(r0 + u) where u = p t: first shift by r0, then scale u^k -> p^k t^k
    shifted = list(f)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            shifted[j] += r0 * shifted[j + 1]
    for k in range(n):
        out[k] = shifted[k] * p ** k
    return out


# ---------------------------------------------------------------------------
# local torsion and divisibility
# ---------------------------------------------------------------------------

def _y_on_curve(E: CurveModel, p: int, x: PadicNumber):
    """A y with (x, y) in E(Qp), or None; ambiguity raises."""
    a1, a2, a3, a4, a6 = E.a_invariants
    g = 4 * (x ** 3 + a2 * x * x + a4 * x + a6) + (a1 * x + a3) * (a1 * x + a3)
    if g.is_exact_zero:
        return (-(a1 * x + a3)) / 2
    if g.is_zero_like:
        raise InconclusivePrecision("y^2 value indistinguishable from zero")
    if g.valuation % 2:
        return None
    u = g.unit % p
    if pow(u, (p - 1) // 2, p) != 1:
        return None
    s = g.sqrt()
    return (s - a1 * x - a3) / 2


def local_p_torsion_trivial(E: CurveModel, p: int, prec: int = 12) -> bool:
    """True iff E(Qp) has no point of order p (good reduction, odd p)."""
    if E.discriminant() % p == 0:
        raise ValueError("good reduction required")
    f = division_polynomials(E).psi_x(p)
    roots, ambiguous = zp_roots(f, p, prec)
    for r in roots:
        x = PadicNumber.from_residue(r, p, prec)
        try:
            y = _y_on_curve(E, p, x)
        except InconclusivePrecision:
            ambiguous = True
            continue
        if y is not None:
            return False
    if ambiguous:
        raise InconclusivePrecision(
            f"p-torsion of {E.label} over Q_{p} undecided at precision {prec}")
    return True


def _eval_poly_padic(f: list[int], x: PadicNumber, p: int, prec: int) -> PadicNumber:
    acc = PadicNumber.zero(p)
    power = PadicNumber.from_int(1, p, prec)
    for c in f:
        if c:
            acc = acc + power * PadicNumber.from_int(c, p, prec)
        power = power * x
    return acc


def p_division_candidates(E: CurveModel, p: int, P: Point, prec: int):
    """Candidate x-coordinates in Qp for points Q with p*Q = +-P.

    Solves phi_p(X) - x(P) psi_p(X)^2 = 0 over Qp, including candidates of
    negative valuation via the reversed polynomial.  Returns (list of
    PadicNumber x-coordinates, ambiguous flag).
    """
    dp = division_polynomials(E)
    xP = P.x
    v = 0 if xP.is_zero_like else min(xP.valuation, 0)
    scale = p ** (-v)  # clear denominators of x(P)
    if xP.is_zero_like:
        num = 0
    else:
        num = xP.unit * p ** (xP.valuation - v)
    work = prec + 2 * abs(v) + 4
    mod = p ** (2 * (work + HENSEL_EXTRA_DEPTH))
    phi, psi2 = dp.reduced_mult_data(p, mod)
    g = _poly_trim([_sym((scale * a - num * b) % mod, mod)
                    for a, b in _zip_pad(phi, psi2)])
    out = []
    roots, amb1 = zp_roots(g, p, work)
    for r in roots:
        out.append(PadicNumber.from_residue(r, p, work))
    grev = _poly_trim(list(reversed(g)))
    roots_rev, amb2 = zp_roots(grev, p, work)
    for r in roots_rev:
        if r % p == 0 and r != 0:
            out.append(1 / PadicNumber.from_residue(r, p, work))
    return out, (amb1 or amb2)


def _zip_pad(a, b):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _sym(c, mod):
    c %= mod
    return c - mod if c > mod // 2 else c


def _points_agree(P: Point, Q: Point) -> bool:
    if P.is_infinity or Q.is_infinity:
        return P.is_infinity and Q.is_infinity
    return (P.x - Q.x).is_zero_like and (P.y - Q.y).is_zero_like


def find_p_preimages(E: CurveModel, p: int, P: Point, prec: int) -> list[Point]:
    """All Q in E(Qp) with p*Q = P, at working precision.

    Raises InconclusivePrecision when root finding could not be completed;
    an empty list is a certified negative.
    """
    if P.is_infinity:
        tors = _p_torsion_points(E, p, prec)
        return [INFINITY] + tors
    cands, ambiguous = p_division_candidates(E, p, P, prec)
    found = []
    for x in cands:
        try:
            y = _y_on_curve(E, p, x)
        except InconclusivePrecision:
            ambiguous = True
            continue
        if y is None:
            continue
        a1, _, a3, _, _ = E.a_invariants
        for Q in (Point(x, y), Point(x, -y - a1 * x - a3)):
            img = padic_mul(E, p, Q)
            if _points_agree(img, P):
                found.append(Q)
    if not found and ambiguous:
        raise InconclusivePrecision(
            f"division by {p} undecided on {E.label} at precision {prec}")
    return found


def _p_torsion_points(E: CurveModel, p: int, prec: int) -> list[Point]:
    f = division_polynomials(E).psi_x(p)
    roots, ambiguous = zp_roots(f, p, prec)
    pts = []
    for r in roots:
        x = PadicNumber.from_residue(r, p, prec)
        try:
            y = _y_on_curve(E, p, x)
        except InconclusivePrecision:
            ambiguous = True
            continue
        if y is not None:
            a1, _, a3, _, _ = E.a_invariants
            pts.append(Point(x, y))
            minus = Point(x, -y - a1 * x - a3)
            if not (y - minus.y).is_zero_like:
                pts.append(minus)
    if ambiguous:
        raise InconclusivePrecision("p-torsion enumeration incomplete")
    return pts


_TORSION_CACHE: dict[tuple, bool] = {}
_V0_CACHE: dict[tuple, int] = {}


def _torsion_trivial_cached(E: CurveModel, p: int) -> bool:
    key = (E.label, E.a_invariants, p)
    if key not in _TORSION_CACHE:
        _TORSION_CACHE[key] = local_p_torsion_trivial(E, p)
    return _TORSION_CACHE[key]


def _log_image_valuation(E: CurveModel, p: int) -> int:
    """min val of the extended log over E(Qp): 1 unless an order-p point of
    E(F_p) lifts to a point of unit logarithm, which can only happen at
    anomalous primes."""
    key = (E.label, E.a_invariants, p)
    if key in _V0_CACHE:
        return _V0_CACHE[key]
    rc = count_points(E, p)
    v0 = 1
    if rc.curve_order % p == 0:
        from .curves import fp_mul
        m = rc.curve_order // p
        a1, _, a3, _, _ = E.a_invariants
        for x0 in range(p):
            g = (4 * E.rhs(x0) + (a1 * x0 + a3) ** 2) % p
            if pow(g, (p - 1) // 2, p) not in (0, 1):
                continue
            s = _mod_sqrt_int(g, p)
            y0 = (s - a1 * x0 - a3) * pow(2, -1, p) % p
            T = fp_mul(E, p, m, (x0, y0))
            if T is None:
                continue
            # Hensel-lift a point reducing to T and measure its log.
            prec = 10
            x = PadicNumber.from_int(T[0], p, prec) if T[0] else PadicNumber.zero(p)
            try:
                y = _y_on_curve(E, p, x)
            except InconclusivePrecision:
                continue
            if y is None:
                continue
            if (y.residue(1) - T[1]) % p:
                y = -y - a1 * x - a3
            lam = extended_log(E, p, Point(x, y), prec)
            if not lam.is_zero_like and lam.valuation == 0:
                v0 = 0
            break
    _V0_CACHE[key] = v0
    return v0


def _mod_sqrt_int(a: int, p: int) -> int:
    from .padic import _tonelli
    r = _tonelli(a % p, p)
    if r is None:
        raise ValueError("not a residue")
    return r


def is_locally_p_divisible(E: CurveModel, p: int, P: Point,
                           prec: int = 12, multiplicity: int = 1) -> bool:
    """Whether P lies in p^multiplicity * E(Qp).

    P is a local Point (PadicNumber coordinates) or a rational Point, which
    is embedded at working precision first.  When E(Qp) has no p-torsion
    the extended logarithm decides membership outright (E(Qp) is then
    Zp x prime-to-p torsion, and torsion is p-divisible); otherwise the
    division-polynomial preimage search decides it unconditionally.
    """
    if P.is_infinity:
        return True
    if isinstance(P.x, (Fraction, int)):
        P = padic_point(E, P, p, prec + 2 * multiplicity + 6)
    if _torsion_trivial_cached(E, p):
        v0 = _log_image_valuation(E, p)
        need = v0 + multiplicity
        lam = extended_log(E, p, P, prec + need + 2)
        if lam.is_exact_zero:
            return True
        if lam.is_zero_like:
            if lam.valuation >= need:
                return True
            raise InconclusivePrecision("log valuation undetermined")
        return lam.valuation >= need
    preimages = find_p_preimages(E, p, P, prec)
    if multiplicity <= 1:
        return bool(preimages)
    inconclusive = False
    for Q in preimages:
        try:
            if is_locally_p_divisible(E, p, Q, prec, multiplicity - 1):
                return True
        except InconclusivePrecision:
            inconclusive = True
    if inconclusive:
        raise InconclusivePrecision("nested division undecided")
    return False


# ---------------------------------------------------------------------------
# unit Frobenius eigenvalue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitEigenvalue:
    """The unit root of x^2 - a_p x + p at an ordinary prime."""

    u: PadicNumber
    a_p: int
    precision: int

    def __post_init__(self):
        p = self.u.p
        n = self.precision
        if self.u.valuation != 0:
            raise ValueError("eigenvalue must be a unit")
        if (self.u.residue(1) - self.a_p) % p:
            raise ValueError("eigenvalue must reduce to a_p mod p")
        check = self.u * self.u - self.a_p * self.u + p
        if not check.is_zero_mod(min(n, check.abs_prec)):
            raise ValueError("eigenvalue fails its characteristic equation")


def unit_frobenius_eigenvalue(E: CurveModel, p: int, precision: int) -> UnitEigenvalue:
    """Hensel lift of the unit root of x^2 - a_p x + p from x = a_p mod p."""
    rc = count_points(E, p)
    if rc.kind == GOOD_SUPERSINGULAR:
        raise SupersingularInput(f"{E.label} is supersingular at {p}")
    a = rc.a_p
    r = a % p
    k = 1
    while k < precision:
        k = min(2 * k, precision)
        mod = p ** k
        fr = (r * r - a * r + p) % mod
        dr = (2 * r - a) % mod
        r = (r - fr * pow(dr, -1, mod)) % mod
    return UnitEigenvalue(PadicNumber(p, 0, r, precision), a, precision)


# ---------------------------------------------------------------------------
# nontriviality of the reduction-kernel map
# ---------------------------------------------------------------------------

def psi_bar_nontrivial(E: CurveModel, p: int, case: str,
                       generators: tuple[Point, Point],
                       pdef_point: Point | None = None,
                       prec: int = 12) -> bool:
    """Case analysis for the map from the kernel lattice into the formal group.

    `case` is "case1" or "case2" (index of the kernel in the full lattice);
    `generators` are the rational generators P1, P2; `pdef_point` is the
    distinguished point whose reduction has order coprime to p, required in
    case 2.
    """
    trivial_torsion = local_p_torsion_trivial(E, p)
    P1, P2 = generators
    if trivial_torsion:
        if case == "case2":
            return True
        return not (is_locally_p_divisible(E, p, P1, prec, multiplicity=2)
                    and is_locally_p_divisible(E, p, P2, prec, multiplicity=2))
    if case == "case1":
        return not (is_locally_p_divisible(E, p, P1, prec)
                    and is_locally_p_divisible(E, p, P2, prec))
    if pdef_point is None:
        raise ValueError("case 2 requires the distinguished point")
    return not is_locally_p_divisible(E, p, pdef_point, prec)
