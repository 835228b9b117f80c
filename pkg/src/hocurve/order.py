"""Streaming curve-order comparison and discrete index conversions.

Points are exact fixed-point bit sequences in [0,1)^d.  The comparator
zooms through nested subcubes, consuming one coordinate bit per axis per
round, while maintaining the signed permutation and traversal direction of
the current subcube; it never materializes a curve and inspects at most
d * precision bits.  Ties at cell boundaries follow the err-on-the-far-side
convention: a point belongs to the cell whose interior lies away from the
origin, which for exact fixed-point coordinates is simply the cell
addressed by the remaining bits.

One round routine drives compare (two points, early exit on the first
differing bit), vertex_index (point to rank) and index_vertex (rank to
point).  The face-entry family runs the documented variant of the round;
d = 2 uses the identical code path and reproduces the classic 2-D curve on
which both families coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Sequence

from .construction import (
    CurveSpec,
    FAMILY_BUTZ,
    FAMILY_HO_FACE,
    FAMILY_HO_ORIGIN,
    build_ho_curve,
    decompose_self_similar,
)
from .core import SignedPermutation, Vertex, compose, flipped
from .errors import (
    CoordinateOutOfRange,
    DimensionTooSmall,
    OutOfGrid,
    OutOfRange,
    PrecisionMismatch,
    UnsupportedFamily,
)


@dataclass(frozen=True)
class FixedPoint:
    """A point of [0,1)^d with every coordinate an m-bit fixed-point value
    (most significant bit first: coordinate = coords[j] / 2^m)."""

    coords: tuple[int, ...]
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise PrecisionMismatch("precision must be >= 1")
        top = 1 << self.precision
        for c in self.coords:
            if not 0 <= c < top:
                raise CoordinateOutOfRange(
                    f"coordinate {c} outside [0, 2^{self.precision})")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def from_fractions(cls, values: Sequence[Fraction], precision: int) -> "FixedPoint":
        """Truncate rational coordinates to the given precision (exact for
        dyadic values with at most that many fractional bits)."""
        bits = []
        scale = 1 << precision
        for v in values:
            if not 0 <= v < 1:
                raise CoordinateOutOfRange(f"coordinate {v} outside [0,1)")
            bits.append((v.numerator * scale) // v.denominator)
        return cls(tuple(bits), precision)

    def bit(self, axis: int, round_idx: int) -> int:
        return (self.coords[axis - 1] >> (self.precision - 1 - round_idx)) & 1

    def value(self, axis: int) -> Fraction:
        return Fraction(self.coords[axis - 1], 1 << self.precision)

    def widen(self, precision: int) -> "FixedPoint":
        """Zero-pad to a larger shared precision."""
        if precision < self.precision:
            raise PrecisionMismatch("cannot narrow a fixed-point value")
        shift = precision - self.precision
        return FixedPoint(tuple(c << shift for c in self.coords), precision)


@dataclass
class ComparatorState:
    """Mutable descent state: traversal direction of the current subcube,
    unsigned permutation by position, and the signs of the inverse
    permutation by axis.  Slot 0 of both arrays is a sentinel."""

    direction: int
    unsgned_prm: list[int]
    sgns_inv_prm: list[int]

    @classmethod
    def initial(cls, d: int) -> "ComparatorState":
        return cls(1, list(range(d + 1)), [1] * (d + 1))


def _check_spec(spec: CurveSpec) -> bool:
    """Validate the spec for order operations; returns the face-variant flag."""
    if spec.family == FAMILY_BUTZ:
        raise UnsupportedFamily("ordering operations cover the self-similar HO families only")
    if spec.d < 2:
        raise DimensionTooSmall("ordering needs d >= 2")
    return spec.family == FAMILY_HO_FACE and spec.d >= 3


# -- 2-D delegation ---------------------------------------------------------
#
# The descent below is stated for d >= 3 (its slot-1 and slot-(d-1)
# corrections collide when d = 2), so two dimensions run a plain Hilbert
# state machine.  Its transition table is not hard-coded: it is read off the
# built 2-D curve once, by decomposing the level-2 curve into isometric
# copies of the level-1 curve.  Both entry families coincide here.


@lru_cache(maxsize=1)
def _d2_blocks() -> tuple[tuple[SignedPermutation, bool], ...]:
    two = build_ho_curve(CurveSpec(2, FAMILY_HO_ORIGIN, 2))
    one = build_ho_curve(CurveSpec(2, FAMILY_HO_ORIGIN, 1))
    return tuple(decompose_self_similar(two.curve.body, one.curve.body))


def _d2_locate(state, cbits) -> int:
    """Reference rank of the half-cell holding the given coordinate bits."""
    perm, rev = state
    gamma = 0
    for p in (1, 2):
        img = perm(p)
        bit = cbits[abs(img) - 1] ^ flipped(img)
        gamma |= bit << (p - 1)
    t = gamma ^ (gamma >> 1)
    return t


def _d2_child(state, t: int):
    perm, rev = state
    sub_perm, sub_rev = _d2_blocks()[t]
    return (compose(perm, sub_perm), rev ^ sub_rev)


def _d2_cell_of(state, t: int) -> tuple[int, int]:
    perm, rev = state
    gamma = t ^ (t >> 1)
    bits = [0, 0]
    for p in (1, 2):
        img = perm(p)
        bits[abs(img) - 1] = ((gamma >> (p - 1)) & 1) ^ flipped(img)
    return bits[0], bits[1]


def _d2_compare(p: FixedPoint, q: FixedPoint) -> int:
    state = (SignedPermutation.identity(2), False)
    for rnd in range(p.precision):
        pt = _d2_locate(state, [p.bit(1, rnd), p.bit(2, rnd)])
        qt = _d2_locate(state, [q.bit(1, rnd), q.bit(2, rnd)])
        if pt != qt:
            ppos = 3 - pt if state[1] else pt
            qpos = 3 - qt if state[1] else qt
            return 1 if ppos < qpos else -1
        state = _d2_child(state, pt)
    return 0


def _d2_vertex_index(k: int, v: Vertex) -> int:
    state = (SignedPermutation.identity(2), False)
    rank = 0
    for rnd in range(k):
        bits = [(c >> (k - 1 - rnd)) & 1 for c in v]
        t = _d2_locate(state, bits)
        pos = 3 - t if state[1] else t
        rank = (rank << 2) | pos
        state = _d2_child(state, t)
    return rank


def _d2_index_vertex(k: int, r: int) -> Vertex:
    state = (SignedPermutation.identity(2), False)
    coords = [0, 0]
    for rnd in range(k):
        pos = (r >> (2 * (k - 1 - rnd))) & 3
        t = 3 - pos if state[1] else pos
        bits = _d2_cell_of(state, t)
        coords = [(c << 1) | b for c, b in zip(coords, bits)]
        state = _d2_child(state, t)
    return tuple(coords)


def _round(
    state: ComparatorState,
    d: int,
    pbits: Sequence[int],
    qbits: Sequence[int],
    face: bool,
) -> tuple[bool, int]:
    """One descent round.

    ``pbits``/``qbits`` hold the points' current coordinate bit per axis
    (index axis-1); pass the same sequence twice to descend with a single
    point.  Returns ``(True, cmp)`` as soon as the points separate, where
    cmp is +1 when p comes first; otherwise mutates the state to describe
    the common subcube and returns ``(False, rank)`` with the subcube's
    rank along the reference (non-reversed) traversal.
    """
    prm = state.unsgned_prm
    sgns = state.sgns_inv_prm
    child_abs = [0] * (d + 1)
    child_sgns = [0] * (d + 1)
    entr_axs = prm[d]
    ext_axs = prm[d - 1]
    quart_axs = prm[d]
    sbcube = 0
    for i in range(1, d + 1):
        axis = quart_axs
        quart_axs = prm[d - i]
        sbcube <<= 1
        pb = pbits[axis - 1]
        qb = qbits[axis - 1]
        if pb != qb:
            return True, state.direction * sgns[axis] * (1 if qb > pb else -1)
        child_sgns[axis] = (2 * pb - 1) if face else (1 - 2 * pb)
        if pb == flipped(sgns[axis]):
            if i >= 2:
                child_abs[i - 2] = ext_axs
            ext_axs = axis
        else:
            if i >= 2:
                child_abs[i - 2] = entr_axs
            entr_axs = axis
            sbcube += 1
            sgns[quart_axs] = -sgns[quart_axs]
    if face:
        child_abs[d - 1] = entr_axs + ext_axs - prm[1]
        child_abs[d] = prm[1]
    else:
        child_abs[d - 1] = prm[1]
        child_abs[d] = entr_axs + ext_axs - prm[1]
    full = (1 << d) - 1
    in_corner = sbcube in (0, full)
    if in_corner:
        child_abs[d - 1], child_abs[d] = child_abs[d], child_abs[d - 1]
    if sbcube >= 3 * (1 << d) // 4:
        child_abs[1] = prm[d]
    if not face:
        child_sgns[prm[1]] = -child_sgns[prm[1]]
    orientation = child_abs[d]
    if in_corner == face:
        child_sgns[orientation] = -child_sgns[orientation]
    state.unsgned_prm = child_abs
    state.sgns_inv_prm = child_sgns
    if ext_axs == orientation:
        state.direction = -state.direction
    return False, sbcube


def compare(p: FixedPoint, q: FixedPoint, spec: CurveSpec) -> int:
    """+1 when p precedes q along the curve, -1 when it follows, 0 when the
    points are bit-identical.  Runs at most ``precision`` rounds."""
    face = _check_spec(spec)
    d = spec.d
    if p.dim != d or q.dim != d:
        raise CoordinateOutOfRange(f"points must have dimension {d}")
    if p.precision != q.precision:
        raise PrecisionMismatch(f"precisions differ: {p.precision} vs {q.precision}")
    if p.coords == q.coords:
        return 0
    if d == 2:
        return _d2_compare(p, q)
    state = ComparatorState.initial(d)
    for rnd in range(p.precision):
        pbits = [p.bit(a, rnd) for a in range(1, d + 1)]
        qbits = [q.bit(a, rnd) for a in range(1, d + 1)]
        decided, value = _round(state, d, pbits, qbits, face)
        if decided:
            return value
    return 0


def vertex_index(spec: CurveSpec, v: Vertex) -> int:
    """Rank (0-based) of a level-k grid vertex along the curve, computed by
    per-level descent without materializing the curve."""
    face = _check_spec(spec)
    d, k = spec.d, spec.k
    if len(v) != d:
        raise OutOfGrid(f"vertex must have {d} coordinates")
    hi = 1 << k
    if any(not 0 <= c < hi for c in v):
        raise OutOfGrid(f"vertex {v} outside the level-{k} grid")
    if d == 2:
        return _d2_vertex_index(k, v)
    state = ComparatorState.initial(d)
    rank = 0
    for rnd in range(k):
        bits = [(c >> (k - 1 - rnd)) & 1 for c in v]
        direction = state.direction
        _, sbcube = _round(state, d, bits, bits, face)
        digit = sbcube if direction == 1 else (1 << d) - 1 - sbcube
        rank = (rank << d) | digit
    return rank


def index_vertex(spec: CurveSpec, r: int) -> Vertex:
    """The r-th vertex (0-based) of the level-k curve; inverse of
    vertex_index."""
    face = _check_spec(spec)
    d, k = spec.d, spec.k
    if not 0 <= r < 1 << (d * k):
        raise OutOfRange(f"rank {r} outside [0, 2^{d * k})")
    if d == 2:
        return _d2_index_vertex(k, r)
    state = ComparatorState.initial(d)
    coords = [0] * d
    for rnd in range(k):
        digit = (r >> (d * (k - 1 - rnd))) & ((1 << d) - 1)
        sbcube = digit if state.direction == 1 else (1 << d) - 1 - digit
        gray = sbcube ^ (sbcube >> 1)
        pos_of = [0] * (d + 1)
        for t in range(1, d + 1):
            pos_of[state.unsgned_prm[t]] = t
        bits = [((gray >> (pos_of[j] - 1)) & 1) ^ flipped(state.sgns_inv_prm[j])
                for j in range(1, d + 1)]
        for j in range(d):
            coords[j] = (coords[j] << 1) | bits[j]
        _, got = _round(state, d, bits, bits, face)
        if got != sbcube:
            raise AssertionError("descent disagrees with its own cell addressing")
    return tuple(coords)


def sort_points(points: Sequence[FixedPoint], spec: CurveSpec) -> list[int]:
    """Indices of the points in curve order; duplicates keep input order."""
    _check_spec(spec)
    if not points:
        return []
    prec = points[0].precision
    for p in points[1:]:
        if p.precision != prec:
            raise PrecisionMismatch("all points must share one precision")

    def cmp(i: int, j: int) -> int:
        return -compare(points[i], points[j], spec)

    return sorted(range(len(points)), key=cmp_to_key(cmp))
