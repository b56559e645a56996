"""Receptacle, natural line, slopes, and the distinguished line.

The receptacle is the kernel of reduction inside the rank-2 lattice of
rational points tensored with Zp; its generators are integer combinations
of the fixture basis (P1, P2) and are carried as coefficient vectors, so
nothing here ever needs the enormous exact coordinates of n*Q for large n:
reductions happen in E(F_p) and local computations in E(Qp).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import CurveModel, Point, count_points, fp_add, fp_mul, reduce_point
from .errors import BothZero, PsiBarTrivial
from .localanalysis import (
    padic_add,
    padic_mul,
    padic_point,
    phi_map,
    psi_bar_nontrivial,
)
from .padic import PadicNumber, ProjectiveSlope, normalize_slope

CASE1 = "case1"
CASE2A = "case2a"
CASE2B = "case2b"


@dataclass(frozen=True)
class Receptacle:
    """Kernel of reduction in the rank-2 lattice, with generator recipe.

    Generators are recorded as integer coefficient vectors in the (P1, P2)
    basis: Q_i = combo[0]*P1 + combo[1]*P2.
    """

    case: str
    q1_combo: tuple[int, int]
    q2_combo: tuple[int, int]
    c: int
    index: int

    def describe(self) -> str:
        return f"{self.case}: Q1 = {_combo_text(self.q1_combo)}, " \
               f"Q2 = {_combo_text(self.q2_combo)}"


def _combo_text(combo: tuple[int, int]) -> str:
    a, b = combo
    terms = []
    if a:
        terms.append("P1" if a == 1 else f"{a}*P1")
    if b:
        terms.append("P2" if b == 1 else f"{b}*P2")
    return " + ".join(terms) if terms else "O"


@dataclass(frozen=True)
class NaturalLine:
    """Kernel line of the reduction-kernel pairing map, when defined."""

    defined: bool
    k: int | None = None
    at_infinity: bool = False

    def bucket(self, p: int) -> int | None:
        if not self.defined:
            return None
        return p if self.at_infinity else self.k

    def generator_text(self) -> str:
        if not self.defined:
            return "undefined"
        if self.at_infinity:
            return "Q2"
        if self.k == 0:
            return "Q1"
        return f"Q1 + {self.k}*Q2"


@dataclass(frozen=True)
class DistinguishedLine:
    """Mode of a mod-p slope distribution, under a dominance rule."""

    determined: bool
    bucket: int | None
    mode_count: int
    second_count: int

    def text(self, p: int) -> str:
        if not self.determined:
            return "?"
        return "(1,0)" if self.bucket == p else f"({self.bucket},1)"


def _image_order(E: CurveModel, p: int, R, group_order: int) -> int:
    if R is None:
        return 1
    n = group_order
    d = 2
    left = n
    order = n
    factors = []
    while d * d <= left:
        if left % d == 0:
            factors.append(d)
            while left % d == 0:
                left //= d
        d += 1 if d == 2 else 2
    if left > 1:
        factors.append(left)
    for q in factors:
        while order % q == 0 and fp_mul(E, p, order // q, R) is None:
            order //= q
    return order


def compute_receptacle(E: CurveModel, p: int) -> Receptacle:
    """Generator recipe from the p-parts (a1, a2) of the reduction orders.

    (1,1) -> {P1, P2}; (1,p) -> {P1, pP2}; (p,1) -> {pP1, P2};
    (p,p) -> {P1 + cP2, pP2} with c minimal in [0, p) making the image
    order of P1 + cP2 coprime to p.
    """
    P1, P2 = E.gens
    N = count_points(E, p).curve_order
    R1 = reduce_point(E, P1, p)
    R2 = reduce_point(E, P2, p)
    a1 = p if _image_order(E, p, R1, N) % p == 0 else 1
    a2 = p if _image_order(E, p, R2, N) % p == 0 else 1
    if a1 == 1 and a2 == 1:
        return Receptacle(CASE1, (1, 0), (0, 1), 0, 1)
    if a1 == 1:
        return Receptacle(CASE2A, (1, 0), (0, p), 0, p)
    if a2 == 1:
        return Receptacle(CASE2A, (p, 0), (0, 1), 0, p)
    for c in range(p):
        S = fp_add(E, p, R1, fp_mul(E, p, c, R2))
        if _image_order(E, p, S, N) % p != 0:
            return Receptacle(CASE2B, (1, c), (0, p), c, p)
    raise RuntimeError("no c in [0, p) gives a p-coprime image order")
    # unreachable: the image of the p-part of E(F_p) is Z/p, so some
    # combination avoids it


def _local_combo(E: CurveModel, p: int, combo: tuple[int, int], prec: int) -> Point:
    P1, P2 = E.gens
    L1 = padic_point(E, P1, p, prec)
    L2 = padic_point(E, P2, p, prec)
    return padic_add(E, padic_mul(E, combo[0], L1), padic_mul(E, combo[1], L2))


def _fp_combo(E: CurveModel, p: int, combo: tuple[int, int]):
    R1 = reduce_point(E, E.gens[0], p)
    R2 = reduce_point(E, E.gens[1], p)
    return fp_add(E, p, fp_mul(E, p, combo[0], R1), fp_mul(E, p, combo[1], R2))


def pdef_point_local(E: CurveModel, p: int, H: Receptacle, prec: int = 12) -> Point | None:
    """The distinguished point whose image order is coprime to p (case 2)."""
    if H.case == CASE1:
        return None
    if H.case == CASE2B:
        return _local_combo(E, p, (1, H.c), prec)
    # case 2a: the generator whose reduction order is coprime to p
    combo = (1, 0) if H.q1_combo == (1, 0) else (0, 1)
    return _local_combo(E, p, combo, prec)


def natural_line_from_generators(E: CurveModel, p: int,
                                 Q1: Point, Q2: Point) -> NaturalLine:
    """Natural line for explicitly given receptacle generators.

    Computes the image orders n1, n2, pushes n_i * Q_i into the formal
    group, and solves phi(res(n1 Q1)) + (k n1/n2) phi(res(n2 Q2)) = 0
    for k in F_p.  Assumes the pairing map is nontrivial.
    """
    N = count_points(E, p).curve_order
    n1 = _image_order(E, p, reduce_point(E, Q1, p), N)
    n2 = _image_order(E, p, reduce_point(E, Q2, p), N)
    prec = 8
    L1 = padic_mul(E, n1, padic_point(E, Q1, p, prec))
    L2 = padic_mul(E, n2, padic_point(E, Q2, p, prec))
    return _solve_line(E, p, n1, n2, L1, L2)


def _solve_line(E: CurveModel, p: int, n1: int, n2: int,
                L1: Point, L2: Point) -> NaturalLine:
    a = phi_map(E, p, L1)
    b = phi_map(E, p, L2)
    av = a.residue(2) // p
    bv = b.residue(2) // p
    if bv == 0 and av == 0:
        raise PsiBarTrivial("pairing map vanishes on both generators")
    if bv == 0:
        return NaturalLine(True, None, at_infinity=True)
    k = (-av * n2 * pow(bv * n1, -1, p)) % p
    return NaturalLine(True, k)


def compute_natural_line(E: CurveModel, p: int, H: Receptacle,
                         prec: int = 12) -> NaturalLine:
    """Natural line of the receptacle; defined = False when the pairing
    map is trivial (reported, never guessed)."""
    pdef = pdef_point_local(E, p, H, prec)
    case = CASE1 if H.case == CASE1 else "case2"
    if not psi_bar_nontrivial(E, p, case, E.gens, pdef, prec):
        return NaturalLine(False)
    N = count_points(E, p).curve_order
    n1 = _image_order(E, p, _fp_combo(E, p, H.q1_combo), N)
    n2 = _image_order(E, p, _fp_combo(E, p, H.q2_combo), N)
    L1 = padic_mul(E, n1, _local_combo(E, p, H.q1_combo, prec))
    L2 = padic_mul(E, n2, _local_combo(E, p, H.q2_combo, prec))
    return _solve_line(E, p, n1, n2, L1, L2)


def slope_from_heights(h1: PadicNumber, h2: PadicNumber) -> ProjectiveSlope:
    """s = (-h1 : h2) normalized; a doubly-degenerate pairing is surfaced."""
    if h1.is_exact_zero and h2.is_exact_zero:
        raise BothZero("both pairing values vanish exactly")
    return normalize_slope(-h1, h2)


def transform_slope_to_receptacle(s: ProjectiveSlope, H: Receptacle,
                                  p: int) -> ProjectiveSlope:
    """Slope of the same line in the receptacle basis.

    case 1: unchanged; case 2a with Q2 = pP2: (x, py); case 2a with
    Q1 = pP1: (px, y); case 2b: (x - cy, py).
    """
    x, y = s.x, s.y
    if H.case == CASE1:
        return normalize_slope(x, y)
    if H.case == CASE2A:
        if H.q2_combo == (0, p):
            return normalize_slope(x, y.shift(1))
        return normalize_slope(x.shift(1), y)
    c = H.c
    return normalize_slope(x - PadicNumber.from_int(c, p, max(x.prec, y.prec, 1)) * y,
                           y.shift(1))


def distinguished_line(counts: list[int],
                       dominance: Fraction = Fraction(3, 2)) -> DistinguishedLine:
    """Mode bucket under the dominance rule: determined only when the top
    count is at least `dominance` times the runner-up.  Exact arithmetic;
    a flat or tied distribution comes out undetermined."""
    if not counts or all(c == 0 for c in counts):
        return DistinguishedLine(False, None, 0, 0)
    dominance = Fraction(dominance)
    order = sorted(range(len(counts)), key=lambda i: -counts[i])
    top = counts[order[0]]
    second = counts[order[1]] if len(order) > 1 else 0
    if top > 0 and top * dominance.denominator >= dominance.numerator * second:
        return DistinguishedLine(True, order[0], top, second)
    return DistinguishedLine(False, None, top, second)
