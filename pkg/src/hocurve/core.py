"""Integer-grid geometry: directions, vertices, signed permutations, curves.

Conventions used throughout the package:

* Axes are 1-based: axis ``j`` is coordinate ``j`` of a vertex, stored at
  tuple index ``j - 1``.  Axis 0 is reserved as a sentinel and never names
  a real coordinate.
* A *direction* is a nonzero integer ``e`` with ``1 <= |e| <= d``; it
  denotes a unit step of ``sgn(e)`` along axis ``|e|``.
* A *signed permutation* ``p`` is a hypercube isometry given by the images
  of the positive axes; ``p(-a) = -p(a)`` holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

from .errors import (
    DimensionMismatch,
    EmptyInput,
    NonUnitStep,
    RepeatedVertex,
)

Direction = int
Vertex = tuple[int, ...]

# Coordinates are machine integers; keep 2^k - 1 representable with room to
# spare in signed 64-bit arithmetic.
MAX_LEVEL_BITS = 62


def sgn(i: int) -> int:
    if i < 0:
        return -1
    if i > 0:
        return 1
    return 0


def flipped(i: int) -> int:
    """1 for negative arguments, 0 otherwise."""
    return 1 if i < 0 else 0


def axis_of(e: Direction) -> int:
    return abs(e)


def check_direction(e: Direction, d: int) -> Direction:
    if e == 0 or not 1 <= abs(e) <= d:
        raise DimensionMismatch(f"direction {e} invalid in dimension {d}")
    return e


@dataclass(frozen=True)
class SignedPermutation:
    """Hypercube isometry stored as the images of axes 1..d.

    ``image[p - 1]`` is the signed axis that position ``p`` maps to.
    """

    image: tuple[int, ...]

    def __post_init__(self):
        d = len(self.image)
        if sorted(abs(x) for x in self.image) != list(range(1, d + 1)):
            raise DimensionMismatch(f"not a signed permutation: {self.image}")

    @classmethod
    def identity(cls, d: int) -> "SignedPermutation":
        return cls(tuple(range(1, d + 1)))

    @property
    def dim(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        """Image of a signed axis value (0 maps to 0)."""
        if x == 0:
            return 0
        img = self.image[abs(x) - 1]
        return img if x > 0 else -img

    @cached_property
    def _pos_of_axis(self) -> tuple[int, ...]:
        pos = [0] * (self.dim + 1)
        for p, img in enumerate(self.image, start=1):
            pos[abs(img)] = p
        return tuple(pos)

    def position_of(self, axis: int) -> int:
        """Position p with |image[p]| == axis."""
        return self._pos_of_axis[axis]

    def sign_inv(self, axis: int) -> int:
        """Sign of the inverse image of ``axis``."""
        return sgn(self.image[self.position_of(axis) - 1])

    @cached_property
    def inverse(self) -> "SignedPermutation":
        img = [0] * self.dim
        for p, x in enumerate(self.image, start=1):
            img[abs(x) - 1] = p if x > 0 else -p
        return SignedPermutation(tuple(img))

    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.dim + 1))


@dataclass(frozen=True)
class FreeCurve:
    """A curve given by edge directions only, with no anchor point."""

    dirs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.dirs)

    def __iter__(self):
        return iter(self.dirs)


@dataclass(frozen=True)
class AnchoredCurve:
    """Entry vertex plus edge directions; vertices materialized on demand."""

    entry: Vertex
    dirs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.entry)

    @property
    def volume(self) -> int:
        return len(self.dirs) + 1


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with inclusive integer corners."""

    lo: Vertex
    hi: Vertex

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("box corners have different dimensions")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise DimensionMismatch(f"box has lo > hi: {self.lo} / {self.hi}")

    @property
    def volume(self) -> int:
        v = 1
        for a, b in zip(self.lo, self.hi):
            v *= b - a + 1
        return v


XKind = Union[Direction, Vertex, FreeCurve]


def apply_perm(perm: SignedPermutation, x: XKind) -> XKind:
    """Apply a signed permutation to a direction, a unit-cube vertex, or a
    free curve.

    Directions map ``e -> perm(e)``.  Vertices are taken to lie in {0,1}^d
    and are moved by the corresponding isometry of the unit cube: output
    coordinate j is input coordinate ``|perm^-1(j)|``, complemented when the
    inverse image is negative.
    """
    if isinstance(x, FreeCurve):
        if x.dirs and max(abs(e) for e in x.dirs) > perm.dim:
            raise DimensionMismatch("curve dimension exceeds permutation dimension")
        return FreeCurve(tuple(perm(e) for e in x.dirs))
    if isinstance(x, tuple):
        return transform_vertex(perm, x, 2)
    if isinstance(x, int):
        if abs(x) > perm.dim or x == 0:
            raise DimensionMismatch(f"direction {x} invalid in dimension {perm.dim}")
        return perm(x)
    raise TypeError(f"cannot apply permutation to {type(x).__name__}")


def transform_vertex(perm: SignedPermutation, v: Vertex, side: int) -> Vertex:
    """Isometry of the side^d grid cube {0..side-1}^d induced by ``perm``."""
    if len(v) != perm.dim:
        raise DimensionMismatch("vertex dimension does not match permutation")
    inv = perm.inverse
    out = []
    for j in range(1, perm.dim + 1):
        src = inv(j)
        c = v[abs(src) - 1]
        out.append(c if src > 0 else side - 1 - c)
    return tuple(out)


def invert(perm: SignedPermutation) -> SignedPermutation:
    return perm.inverse


def compose(perm: SignedPermutation, tau: SignedPermutation) -> SignedPermutation:
    """Composition applying ``tau`` first, then ``perm``."""
    if perm.dim != tau.dim:
        raise DimensionMismatch("permutation dimensions differ")
    return SignedPermutation(tuple(perm(tau(k)) for k in range(1, perm.dim + 1)))


def reverse(curve: FreeCurve) -> FreeCurve:
    """Traverse a free curve backwards: reverse the order and negate each
    direction."""
    return FreeCurve(tuple(-e for e in reversed(curve.dirs)))


def step(v: Vertex, e: Direction) -> Vertex:
    a = abs(e) - 1
    return v[:a] + (v[a] + sgn(e),) + v[a + 1:]


def materialize(curve: AnchoredCurve) -> list[Vertex]:
    """Vertex sequence of an anchored curve.

    Validates that every step is a unit step along one axis and that no
    vertex repeats.
    """
    d = curve.dim
    v = curve.entry
    out = [v]
    seen = {v}
    for i, e in enumerate(curve.dirs):
        if e == 0 or abs(e) > d:
            raise NonUnitStep(f"edge {i} has direction {e} outside dimension {d}")
        v = step(v, e)
        if v in seen:
            raise RepeatedVertex(f"vertex {v} revisited at step {i + 1}")
        seen.add(v)
        out.append(v)
    return out


def bounding_box(vertices: Sequence[Vertex] | Iterable[Vertex]) -> Box:
    it = iter(vertices)
    try:
        first = next(it)
    except StopIteration:
        raise EmptyInput("bounding box of an empty vertex set") from None
    lo = list(first)
    hi = list(first)
    for v in it:
        for j, c in enumerate(v):
            if c < lo[j]:
                lo[j] = c
            elif c > hi[j]:
                hi[j] = c
    return Box(tuple(lo), tuple(hi))


def perm_depth(perm: SignedPermutation, a: Direction) -> int:
    """Depth of a direction in a signed permutation.

    Zero for the last two positions of |perm|, counting up towards the
    front: the axis at position d-1-j has depth j.
    """
    d = perm.dim
    p = perm.position_of(abs(a))
    if p >= d - 1:
        return 0
    return d - 1 - p
