"""Exact ultrametric geometry as finite cell-set computations.

Regions of Q_q^2 are stored as explicit sets of cell indices over a
bounding box |x1| <= q^box_x, |x2| <= q^box_y at a fixed cell resolution
q^(-r1) x q^(-r2).  A cell index pair (i, j) stands for the cell with
representative (i * q^(-box_x), j * q^(-box_y)), i.e. membership of a
point x is the congruence q^box * x = (i, j) mod q^(box + r).  All set
operations (Minkowski sums, shears, translates, intersections) are exact
integer arithmetic on residues; nothing is ever rounded.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .padic import validate_base, rational_valuation

Rational = Union[int, Fraction]


def qpow(q: int, e: int) -> Fraction:
    """q^e as an exact rational (e may be negative)."""
    return Fraction(q) ** e


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """The interval I(residue, q^-scale_exp) inside O: all x = residue mod q^k."""

    q: int
    scale_exp: int  # length q^(-scale_exp), scale_exp >= 0
    residue: int

    def __post_init__(self):
        validate_base(self.q)
        if self.scale_exp < 0:
            raise ValueError("scale exponent must be >= 0 for subintervals of O")
        object.__setattr__(self, "residue", self.residue % self.q**self.scale_exp)

    @property
    def length(self) -> Fraction:
        return qpow(self.q, -self.scale_exp)

    def contains_residue(self, a: int) -> bool:
        return a % self.q**self.scale_exp == self.residue

    def subintervals(self, finer_exp: int) -> list["Interval"]:
        """Partition into intervals of length q^-finer_exp."""
        if finer_exp < self.scale_exp:
            raise ValueError("refinement must be finer")
        step = self.q**self.scale_exp
        return [
            Interval(self.q, finer_exp, self.residue + step * t)
            for t in range(self.q ** (finer_exp - self.scale_exp))
        ]

    def __repr__(self) -> str:
        return f"I({self.residue}, {self.q}^-{self.scale_exp})"


class RelationKind(enum.Enum):
    EQUAL = "equal"
    NESTED = "nested"
    DISJOINT = "disjoint"


@dataclass(frozen=True)
class IntervalRelation:
    kind: RelationKind
    distance: Optional[Fraction] = None  # set iff disjoint
    inner: Optional[Interval] = None     # set iff nested


def unit_interval(q: int) -> Interval:
    return Interval(q, 0, 0)


def partition_unit_interval(q: int, k: int) -> list[Interval]:
    """Partition O into q^k intervals of length q^-k."""
    if k < 0:
        raise ValueError("scale exponent must be >= 0")
    return [Interval(q, k, a) for a in range(q**k)]


def interval_distance(i1: Interval, i2: Interval) -> Fraction:
    """Exact distance between two disjoint intervals (q-power valuation of
    the residue difference)."""
    rel = interval_relation(i1, i2)
    if rel.kind is not RelationKind.DISJOINT:
        return Fraction(0)
    return rel.distance


def interval_relation(i1: Interval, i2: Interval) -> IntervalRelation:
    """Exactly one of Equal / Nested / Disjoint(distance)."""
    if i1.q != i2.q:
        raise ValueError("mixed bases")
    q = i1.q
    kmin = min(i1.scale_exp, i2.scale_exp)
    if (i1.residue - i2.residue) % q**kmin == 0:
        if i1.scale_exp == i2.scale_exp:
            return IntervalRelation(RelationKind.EQUAL)
        inner = i1 if i1.scale_exp > i2.scale_exp else i2
        return IntervalRelation(RelationKind.NESTED, inner=inner)
    v = _int_valuation(i1.residue - i2.residue, q)
    return IntervalRelation(RelationKind.DISJOINT, distance=qpow(q, -v))


def _int_valuation(n: int, q: int) -> int:
    v = 0
    n = abs(n)
    while n % q == 0:
        n //= q
        v += 1
    return v


# ---------------------------------------------------------------------------
# Cell regions
# ---------------------------------------------------------------------------


def _residue_of(x: Rational, box: int, mod: int, q: int) -> int:
    """Residue of q^box * x mod q^mod_exp; x must lie in the box lattice."""
    w = Fraction(x) * qpow(q, box)
    if w != 0 and rational_valuation(w, q) < 0:
        raise ValueError(f"point {x} lies outside the box |x| <= q^{box}")
    num, den = w.numerator, w.denominator
    return (num * pow(den, -1, mod)) % mod


@dataclass(frozen=True)
class CellRegion:
    """Exact subset of Q_q^2: a set of cells in a box at fixed resolution."""

    q: int
    box: tuple[int, int]          # (box_x, box_y)
    resolution: tuple[int, int]   # (r1, r2); cells of size q^-r1 x q^-r2
    cells: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        validate_base(self.q)
        mx, my = self.mods
        if mx < 1 or my < 1:
            raise ValueError("resolution coarser than the box")
        for i, j in self.cells:
            if not (0 <= i < mx and 0 <= j < my):
                raise ValueError(f"cell index ({i},{j}) out of range")

    @property
    def mods(self) -> tuple[int, int]:
        bx, by = self.box
        r1, r2 = self.resolution
        return self.q ** (bx + r1), self.q ** (by + r2)

    @property
    def cell_measure(self) -> Fraction:
        r1, r2 = self.resolution
        return qpow(self.q, -(r1 + r2))

    def measure(self) -> Fraction:
        return len(self.cells) * self.cell_measure

    # -- grid compatibility ------------------------------------------------

    def refine(self, resolution: tuple[int, int]) -> "CellRegion":
        """Re-express on a finer grid; membership and measure are preserved."""
        r1, r2 = self.resolution
        s1, s2 = resolution
        if s1 < r1 or s2 < r2:
            raise ValueError("refinement must not be coarser")
        if (s1, s2) == (r1, r2):
            return self
        mx, my = self.mods
        f1, f2 = self.q ** (s1 - r1), self.q ** (s2 - r2)
        cells = frozenset(
            (i + mx * a, j + my * b)
            for i, j in self.cells
            for a in range(f1)
            for b in range(f2)
        )
        return CellRegion(self.q, self.box, (s1, s2), cells)

    def _aligned(self, other: "CellRegion") -> tuple["CellRegion", "CellRegion"]:
        if self.q != other.q:
            raise ValueError("mixed bases")
        if self.box != other.box:
            raise ValueError(f"box mismatch {self.box} vs {other.box}")
        res = (max(self.resolution[0], other.resolution[0]),
               max(self.resolution[1], other.resolution[1]))
        return self.refine(res), other.refine(res)

    # -- set algebra ---------------------------------------------------------

    def union(self, other: "CellRegion") -> "CellRegion":
        a, b = self._aligned(other)
        return CellRegion(a.q, a.box, a.resolution, a.cells | b.cells)

    def intersection(self, other: "CellRegion") -> "CellRegion":
        a, b = self._aligned(other)
        return CellRegion(a.q, a.box, a.resolution, a.cells & b.cells)

    def same_set(self, other: "CellRegion") -> bool:
        a, b = self._aligned(other)
        return a.cells == b.cells

    def is_disjoint(self, other: "CellRegion") -> bool:
        a, b = self._aligned(other)
        return not (a.cells & b.cells)

    # -- geometry -------------------------------------------------------------

    def minkowski_sum(self, other: "CellRegion") -> "CellRegion":
        """Exact sumset; cells add residue-wise (sum of two q^-r balls is one)."""
        a, b = self._aligned(other)
        mx, my = a.mods
        cells = frozenset(
            ((i1 + i2) % mx, (j1 + j2) % my)
            for i1, j1 in a.cells
            for i2, j2 in b.cells
        )
        return CellRegion(a.q, a.box, a.resolution, cells)

    def translate(self, t: tuple[Rational, Rational]) -> "CellRegion":
        mx, my = self.mods
        bx, by = self.box
        di = _residue_of(t[0], bx, mx, self.q)
        dj = _residue_of(t[1], by, my, self.q)
        cells = frozenset(((i + di) % mx, (j + dj) % my) for i, j in self.cells)
        return CellRegion(self.q, self.box, self.resolution, cells)

    def shear_x(self, coeff: Rational) -> "CellRegion":
        """Image under (x1, x2) -> (x1 + coeff*x2, x2), cell-exact.

        Requires |coeff| small enough that the image is cell-determined and
        stays inside the box: v(coeff) >= (bx+r1) - (by+r2) and
        |coeff| q^by <= q^bx.
        """
        bx, by = self.box
        r1, r2 = self.resolution
        mx, my = self.mods
        c = Fraction(coeff)
        if c == 0:
            return self
        v = rational_valuation(c, self.q)
        if v < (bx + r1) - (by + r2):
            raise ValueError("shear coefficient too large for this resolution")
        if -v > bx - by:
            raise ValueError("shear would leave the bounding box")
        # gamma = coeff * q^(bx - by) acts on integer residues mod q^(bx+r1)
        gamma = c * qpow(self.q, bx - by)
        g = _residue_of(gamma, 0, mx, self.q)
        cells = frozenset(((i + g * j) % mx, j) for i, j in self.cells)
        return CellRegion(self.q, self.box, self.resolution, cells)

    def contains_point(self, x: tuple[Rational, Rational]) -> bool:
        bx, by = self.box
        mx, my = self.mods
        i = _residue_of(x[0], bx, mx, self.q)
        j = _residue_of(x[1], by, my, self.q)
        return (i, j) in self.cells

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "box": list(self.box),
            "resolution": list(self.resolution),
            "cells": sorted([list(c) for c in self.cells]),
        }


def full_box(q: int, box: tuple[int, int], resolution: tuple[int, int]) -> CellRegion:
    bx, by = box
    r1, r2 = resolution
    mx, my = q ** (bx + r1), q ** (by + r2)
    return CellRegion(q, box, resolution,
                      frozenset(itertools.product(range(mx), range(my))))


def ball_region(q: int, box: tuple[int, int], resolution: tuple[int, int],
                center: tuple[Rational, Rational] = (0, 0),
                radius_exp: tuple[int, int] = (0, 0)) -> CellRegion:
    """B(center, q^s) componentwise: |x1 - c1| <= q^sx, |x2 - c2| <= q^sy."""
    bx, by = box
    r1, r2 = resolution
    sx, sy = radius_exp
    if sx > bx or sy > by:
        raise ValueError("ball exceeds the bounding box")
    if r1 < -sx or r2 < -sy:
        raise ValueError("resolution coarser than the ball")
    mx, my = q ** (bx + r1), q ** (by + r2)
    ci = _residue_of(center[0], bx, mx, q)
    cj = _residue_of(center[1], by, my, q)
    pi, pj = q ** (bx - sx), q ** (by - sy)
    cells = frozenset(
        ((ci + pi * a) % mx, (cj + pj * b) % my)
        for a in range(mx // pi)
        for b in range(my // pj)
    )
    return CellRegion(q, box, resolution, cells)


# ---------------------------------------------------------------------------
# Parabola arcs
# ---------------------------------------------------------------------------


def arc_region(j_int: Interval, resolution: tuple[int, int]) -> CellRegion:
    """The q^-2k neighborhood of the parabola above J = I(a, q^-k), inside
    O x O: all (xi, eta) with xi = a mod q^k and eta = xi^2 mod q^2k."""
    q, k = j_int.q, j_int.scale_exp
    r1, r2 = resolution
    if r1 < 2 * k or r2 < 2 * k:
        raise ValueError("resolution too coarse: need r >= 2 * scale_exp")
    mx, my = q**r1, q**r2
    cells = frozenset(
        (i, (i * i + q ** (2 * k) * t) % my)
        for i in range(j_int.residue, mx, q**k)
        for t in range(my // q ** (2 * k))
    )
    return CellRegion(q, (0, 0), resolution, cells)


def arc_parallelogram(j_int: Interval, anchor: int,
                      resolution: tuple[int, int]) -> CellRegion:
    """The sheared-box form {|xi - a| <= |J|, |eta - 2 a xi + a^2| <= |J|^2}
    for an anchor a in J; coincides with arc_region for every anchor."""
    q, k = j_int.q, j_int.scale_exp
    if not j_int.contains_residue(anchor):
        raise ValueError(f"anchor {anchor} not in {j_int}")
    r1, r2 = resolution
    if r1 < 2 * k or r2 < 2 * k:
        raise ValueError("resolution too coarse: need r >= 2 * scale_exp")
    mx, my = q**r1, q**r2
    cells = frozenset(
        (i, (2 * anchor * i - anchor * anchor + q ** (2 * k) * t) % my)
        for i in range(j_int.residue, mx, q**k)
        for t in range(my // q ** (2 * k))
    )
    return CellRegion(q, (0, 0), resolution, cells)


def arc_absorb_ball(j_int: Interval,
                    resolution: Optional[tuple[int, int]] = None) -> bool:
    """Whether the arc neighborhood absorbs the |J|^2 ball: theta + B = theta."""
    k = j_int.scale_exp
    res = resolution or (2 * k, 2 * k)
    theta = arc_region(j_int, res)
    ball = ball_region(j_int.q, (0, 0), res, radius_exp=(-2 * k, -2 * k))
    return theta.minkowski_sum(ball).same_set(theta)


def arc_center_ball(j_int: Interval, anchor: int,
                    resolution: tuple[int, int]) -> CellRegion:
    """B((a, a^2), |J|): the square of side |J| around the anchor's parabola
    point; contains the arc region."""
    q, k = j_int.q, j_int.scale_exp
    if not j_int.contains_residue(anchor):
        raise ValueError(f"anchor {anchor} not in {j_int}")
    return ball_region(q, (0, 0), resolution,
                       center=(anchor, anchor * anchor), radius_exp=(-k, -k))


# ---------------------------------------------------------------------------
# Dual tubes and tilings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tube:
    """A translate of the dual parallelogram of an arc: the set
    {|x1 + 2 a x2| <= q^N, |x2| <= q^2N} + offset, for any anchor a in K."""

    arc: Interval
    anchor: int
    offset: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))

    def __post_init__(self):
        if not self.arc.contains_residue(self.anchor):
            raise ValueError(f"anchor {self.anchor} not in {self.arc}")
        object.__setattr__(
            self, "offset", (Fraction(self.offset[0]), Fraction(self.offset[1]))
        )

    @property
    def q(self) -> int:
        return self.arc.q

    @property
    def scale_exp(self) -> int:
        return self.arc.scale_exp

    def region(self, resolution: Optional[tuple[int, int]] = None) -> CellRegion:
        """Cell set in the box B(0, q^2N); default cells are the q^N-side
        squares whose union the tube is."""
        q, n = self.q, self.scale_exp
        res = resolution or (-n, -n)
        box = (2 * n, 2 * n)
        base = ball_region(q, box, res, radius_exp=(n, 2 * n))
        sheared = base.shear_x(-2 * self.anchor)
        if self.offset == (0, 0):
            return sheared
        return sheared.translate(self.offset)


def dual_tube(arc: Interval, anchor: int) -> Tube:
    if arc.scale_exp < 1:
        raise ValueError("dual tube needs an arc strictly inside O")
    return Tube(arc, anchor)


def tube_shift_set(q: int, n: int) -> list[Fraction]:
    """The horizontal shifts t (digits on exponents [-2N, -N)) whose
    translates T + (t, 0) partition the side-q^2N box."""
    return [Fraction(m, q ** (2 * n)) for m in range(q**n)]


def tile_box_by_tubes(arc: Interval, anchor: Optional[int] = None) -> list[Tube]:
    """Partition B(0, q^2N) into q^N translates of the dual tube of ``arc``."""
    a = arc.residue if anchor is None else anchor
    base = dual_tube(arc, a)
    return [Tube(arc, a, (t, Fraction(0)))
            for t in tube_shift_set(arc.q, arc.scale_exp)]


def verify_tube_partition(arc: Interval,
                          resolution: Optional[tuple[int, int]] = None) -> bool:
    """Cell-level check that the tiles are pairwise disjoint and exhaust the box."""
    q, n = arc.q, arc.scale_exp
    res = resolution or (-n, -n)
    tubes = tile_box_by_tubes(arc)
    regions = [t.region(res) for t in tubes]
    box = full_box(q, (2 * n, 2 * n), res)
    total = sum(len(r.cells) for r in regions)
    union = frozenset().union(*(r.cells for r in regions))
    return total == len(box.cells) and union == box.cells


def tube_intersection_measure(t1: Tube, t2: Tube) -> Fraction:
    """Exact measure of the intersection of two tubes at the same scale with
    distinct arcs; always <= q^2N / d(arcs)."""
    if t1.q != t2.q or t1.scale_exp != t2.scale_exp:
        raise ValueError("tubes must share base and scale")
    rel = interval_relation(t1.arc, t2.arc)
    if rel.kind is not RelationKind.DISJOINT:
        raise ValueError("intersection bound needs distinct arcs")
    r1 = t1.region()
    r2 = t2.region()
    return r1.intersection(r2).measure()


def tube_intersection_bound(t1: Tube, t2: Tube) -> Fraction:
    """The bound q^2N / d(K, K') for the intersection of tubes over distinct arcs."""
    d = interval_distance(t1.arc, t2.arc)
    if d == 0:
        raise ValueError("bound needs distinct arcs")
    return qpow(t1.q, 2 * t1.scale_exp) / d
