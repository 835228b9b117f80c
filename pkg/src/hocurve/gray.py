"""Binary reflected Gray-code curves and their structural predicates.

``gray_code(d)`` is the free curve through the corners of the d-cube that
changes one coordinate per step in reflected-Gray order; it is the sole
building block of well-folded curves.  The helpers here expose the facts
the construction relies on: the alternation pattern of axis 1, the axis
span of prefixes, and the entry/exit corners of an isometric image.
"""

from __future__ import annotations

from threading import Lock

from .core import (
    Direction,
    FreeCurve,
    SignedPermutation,
    Vertex,
    flipped,
)
from .errors import DimensionMismatch, UnsupportedDimension

# Full direction lists get exponentially large; materialization-scale
# operations stop at 2^16 edges.
MAX_MATERIALIZE_DIM = 16

_cache: dict[int, FreeCurve] = {}
_cache_lock = Lock()


def _edge_direction(t: int) -> int:
    """Direction of the t-th edge (1-based) of the reflected Gray curve.

    The axis is one plus the number of trailing zeros of t; the sign is
    read off the Gray-code bit that flips between ranks t-1 and t.
    """
    axis = (t & -t).bit_length()
    g_prev = (t - 1) ^ ((t - 1) >> 1)
    g_here = t ^ (t >> 1)
    return axis if g_here > g_prev else -axis


def gray_code(d: int) -> FreeCurve:
    """Free curve of length 2^d - 1 visiting every corner of the d-cube."""
    if d < 0:
        raise DimensionMismatch("dimension must be >= 0")
    if d > MAX_MATERIALIZE_DIM:
        raise UnsupportedDimension(
            f"gray_code materializes 2^{d} - 1 directions; limit is d <= {MAX_MATERIALIZE_DIM}"
        )
    with _cache_lock:
        cached = _cache.get(d)
    if cached is not None:
        return cached
    curve = FreeCurve(tuple(_edge_direction(t) for t in range(1, 2 ** d)))
    with _cache_lock:
        _cache.setdefault(d, curve)
    return curve


def gray_rank_vertex(rank: int, d: int) -> Vertex:
    """Corner of {0,1}^d visited at the given 0-based rank when anchored at
    the origin."""
    g = rank ^ (rank >> 1)
    return tuple((g >> (j - 1)) & 1 for j in range(1, d + 1))


def extended_gray(d: int):
    """The canonical extension of gray_code(d): entry edge along axis d,
    exit edge along negative axis d-1, body anchored at the origin."""
    from .construction import ExtendedCurve  # local import to avoid a cycle
    from .core import AnchoredCurve

    if d < 2:
        raise DimensionMismatch("extended gray curve needs d >= 2")
    body = AnchoredCurve((0,) * d, gray_code(d).dirs)
    return ExtendedCurve(body=body, entry_edge=d, exit_edge=-(d - 1))


def gray_entry_exit(perm: SignedPermutation) -> tuple[Vertex, Vertex, Direction]:
    """Entry corner, exit corner and orientation of ``perm(gray_code(d))``
    placed in the unit cube.

    The entry has coordinate 1 exactly where the inverse image is negative;
    the exit differs from the entry only along the orientation axis, which
    is the image of axis d.
    """
    d = perm.dim
    inv = perm.inverse
    entry = tuple(flipped(inv(j)) for j in range(1, d + 1))
    orientation = perm(d)
    a = abs(orientation) - 1
    exit_v = entry[:a] + (1 - entry[a],) + entry[a + 1:]
    return entry, exit_v, orientation


def prefix_axes(d: int, n: int) -> frozenset[int]:
    """Set of axes used by the first n edges of gray_code(d).

    Equals {1, ..., ceil(log2(n + 1))}; computed from the actual edges.
    """
    if not 1 <= n <= 2 ** d - 1:
        raise DimensionMismatch(f"n={n} outside 1..2^{d}-1")
    return frozenset((t & -t).bit_length() for t in range(1, n + 1))


def check_alternation(curve: FreeCurve) -> bool:
    """True iff axis-1 edges alternate with other-axis edges, starting and
    ending on axis 1."""
    dirs = curve.dirs
    if not dirs:
        return False
    for i, e in enumerate(dirs):
        if (abs(e) == 1) != (i % 2 == 0):
            return False
    return abs(dirs[-1]) == 1
