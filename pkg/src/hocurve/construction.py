"""Curve construction by inflation.

An approximating curve at level k+1 is obtained from the level-k curve by
replacing every vertex with an isometric image of the Gray-code 1-curve and
re-inserting the parent's edges between consecutive images.  The per-vertex
isometries must satisfy two groups of conditions:

* continuity: consecutive images connect through an edge of the parent's
  direction (sign-propagation rule plus an entry-side sign rule);
* depth windows: the axis of every connecting edge sits in the last two
  positions of both adjacent permutations, and the position of any axis
  shifts by at most one between neighbours.  These keep the curve
  hyperorthogonal (every window of 2^n consecutive edges, n <= d-2, uses
  exactly n+1 axes).

The self-similar families are generated by sorting each permutation by
decreasing local edge distance and fixing the order of the last two
positions and all signs with the continuity rules; the entry-sign schedule
selects the family (corner entry vs. face entry).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    AnchoredCurve,
    Direction,
    SignedPermutation,
    Vertex,
    axis_of,
    flipped,
    materialize,
    perm_depth,
    sgn,
    transform_vertex,
    MAX_LEVEL_BITS,
)
from .errors import (
    ContinuityViolation,
    DimensionMismatch,
    InternalContinuityFailure,
    InternalInvariantError,
    NotAGrayImage,
    NotSelfSimilar,
    AxisAbsent,
    ScheduleViolation,
    UnsupportedDimension,
    UnsupportedFamily,
    ParseError,
)
from .gray import gray_code

FAMILY_HO_ORIGIN = "ho-origin"
FAMILY_HO_FACE = "ho-face"
FAMILY_BUTZ = "butz"
FAMILIES = (FAMILY_HO_ORIGIN, FAMILY_HO_FACE, FAMILY_BUTZ)
HO_FAMILIES = (FAMILY_HO_ORIGIN, FAMILY_HO_FACE)


@dataclass(frozen=True)
class ExtendedCurve:
    """A curve plus the directions of the edge arriving at its entry and the
    edge leaving its exit.  The far endpoints of those edges are not part of
    the curve."""

    body: AnchoredCurve
    entry_edge: Direction
    exit_edge: Direction

    @property
    def dim(self) -> int:
        return self.body.dim

    @property
    def volume(self) -> int:
        return self.body.volume

    def edge_list(self) -> list[Direction]:
        """All edge directions: entry edge, body edges, exit edge."""
        return [self.entry_edge, *self.body.dirs, self.exit_edge]


@dataclass(frozen=True)
class InflationPlan:
    """One signed permutation per parent vertex, plus the orientation type
    of each resulting child image (0: last position carries the entry-edge
    axis; 1: it carries the exit-edge axis, i.e. the image is reversed)."""

    perms: tuple[SignedPermutation, ...]
    types: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.perms)


@dataclass(frozen=True)
class CurveSpec:
    """Selects one concrete curve: dimension, family, refinement level."""

    d: int
    family: str
    k: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFamily(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.d < 2:
            raise UnsupportedDimension("curves need d >= 2")
        if self.k < 0:
            raise DimensionMismatch("level must be >= 0")
        if self.k > MAX_LEVEL_BITS:
            raise DimensionMismatch(f"level {self.k} exceeds coordinate width ({MAX_LEVEL_BITS} bits)")


@dataclass(frozen=True)
class Violation:
    index: int
    condition: str
    detail: str = ""


@dataclass(frozen=True)
class BuiltCurve:
    """A constructed curve together with the per-level plans that produced
    it (for the rotation family, the single level-1 template reused at every
    level)."""

    spec: CurveSpec
    curve: ExtendedCurve
    plans: tuple[InflationPlan, ...]

    def vertices(self) -> list[Vertex]:
        return materialize(self.curve.body)


def root_curve(d: int) -> ExtendedCurve:
    """The single-vertex extended curve every family starts from: entry edge
    along axis d, exit edge along negative axis d-1."""
    if d < 2:
        raise UnsupportedDimension("curves need d >= 2")
    return ExtendedCurve(AnchoredCurve((0,) * d, ()), d, -(d - 1))


def _distance_to_edges(p: int, slots: list[int]) -> int:
    """Edge distance from 1-based vertex position p to the nearest edge slot.

    Edge slot t sits between vertices t and t+1 (slot 0 is the entry edge).
    """
    best = None
    for t in slots:
        dist = t - p if t >= p else p - t - 1
        if best is None or dist < best:
            best = dist
    if best is None:
        raise AxisAbsent("axis has no edge in this curve")
    return best


def local_edge_distance(child: ExtendedCurve, v: Vertex, a: int) -> int:
    """Edge distance of axis ``a`` to vertex ``v`` inside the extended
    curve: one less than the length of the smallest sub-path that contains
    ``v`` and an edge with axis ``a`` (entry and exit edges count)."""
    d = child.dim
    if not 1 <= a <= d:
        raise DimensionMismatch(f"axis {a} outside 1..{d}")
    verts = materialize(child.body)
    try:
        p = verts.index(v) + 1
    except ValueError:
        raise DimensionMismatch(f"vertex {v} is not on the curve") from None
    edges = child.edge_list()
    slots = [t for t, e in enumerate(edges) if axis_of(e) == a]
    return _distance_to_edges(p, slots)


def edge_distance_table(ext: ExtendedCurve) -> list[list[int]]:
    """For every vertex (by position) and axis, the edge distance within the
    whole extended curve.  Row i holds distances for vertex i (0-based),
    column a-1 for axis a; an axis with no edge at all (possible only in a
    root curve) gets a sentinel larger than any real distance or depth."""
    d = ext.dim
    edges = ext.edge_list()
    n = ext.volume
    inf = n + d + 2
    table = [[inf] * d for _ in range(n)]
    # forward: nearest matching edge at or after each vertex
    nxt = [inf] * d
    for p in range(n, 0, -1):
        a = axis_of(edges[p]) - 1
        nxt[a] = p
        row = table[p - 1]
        for j in range(d):
            if nxt[j] < inf:
                row[j] = nxt[j] - p
    # backward: nearest matching edge before each vertex
    prv = [-inf] * d
    for p in range(1, n + 1):
        a = axis_of(edges[p - 1]) - 1
        prv[a] = p - 1
        row = table[p - 1]
        for j in range(d):
            cand = p - prv[j] - 1
            if cand < row[j]:
                row[j] = cand
    return table


def validate_wellfolded_step(
    perms: tuple[SignedPermutation, ...] | list[SignedPermutation],
    edges: list[Direction],
) -> list[Violation]:
    """Check the continuity conditions of an inflation plan.

    ``edges`` lists the entry edge, the parent's internal edges and the exit
    edge, so ``len(edges) == len(perms) + 1``.  Returns an empty list when
    the plan inflates to a connected curve with matching boundary edges.
    """
    K = len(perms)
    if len(edges) != K + 1:
        raise DimensionMismatch("need one edge more than permutations")
    d = perms[0].dim
    out: list[Violation] = []
    e0 = edges[0]
    if perms[0].sign_inv(axis_of(e0)) * sgn(e0) != 1:
        out.append(Violation(0, "entry-sign", f"inverse sign at entry edge {e0} is negative"))
    for i0 in range(K - 1):
        e = edges[i0 + 1]
        p, q = perms[i0], perms[i0 + 1]
        if q.sign_inv(axis_of(e)) * sgn(e) != 1:
            out.append(Violation(i0 + 1, "next-entry-sign",
                                 f"inverse sign of edge {e} in following permutation is negative"))
        pd = axis_of(p(d))
        ea = axis_of(e)
        for j in range(1, d + 1):
            same = q.sign_inv(j) == p.sign_inv(j)
            expect_same = (j == pd) == (j == ea)
            if same != expect_same:
                out.append(Violation(i0 + 1, "sign-propagation", f"axis {j}"))
    eK = edges[K]
    last = perms[K - 1]
    if (last.sign_inv(axis_of(eK)) * sgn(eK) == 1) != (axis_of(last(d)) == axis_of(eK)):
        out.append(Violation(K, "exit-sign",
                             "exit edge sign inconsistent with last permutation's final axis"))
    return out


def validate_hyperorthogonal_step(
    perms: tuple[SignedPermutation, ...] | list[SignedPermutation],
    edges: list[Direction],
) -> list[Violation]:
    """Check the depth-window conditions of an inflation plan: connecting
    edges (including entry and exit) have depth 0 in the adjacent
    permutations, and no axis shifts depth by more than one between
    neighbours."""
    K = len(perms)
    if len(edges) != K + 1:
        raise DimensionMismatch("need one edge more than permutations")
    d = perms[0].dim
    out: list[Violation] = []
    if perm_depth(perms[0], edges[0]) != 0:
        out.append(Violation(0, "entry-depth", f"entry edge {edges[0]} has nonzero depth"))
    if perm_depth(perms[K - 1], edges[K]) != 0:
        out.append(Violation(K, "exit-depth", f"exit edge {edges[K]} has nonzero depth"))
    for i0 in range(K - 1):
        e = edges[i0 + 1]
        if perm_depth(perms[i0], e) != 0 or perm_depth(perms[i0 + 1], e) != 0:
            out.append(Violation(i0 + 1, "edge-depth", f"edge {e} not at depth 0 on both sides"))
        for a in range(1, d + 1):
            if abs(perm_depth(perms[i0], a) - perm_depth(perms[i0 + 1], a)) > 1:
                out.append(Violation(i0 + 1, "depth-jump", f"axis {a}"))
    return out


def validate_depth_vs_distance(parent: ExtendedCurve, plan: InflationPlan) -> list[Violation]:
    """Check that every permutation keeps each axis no deeper than that
    axis's edge distance to its vertex within the whole extended curve."""
    d = parent.dim
    table = edge_distance_table(parent)
    out: list[Violation] = []
    for i0, perm in enumerate(plan.perms):
        for a in range(1, d + 1):
            if perm_depth(perm, a) > table[i0][a - 1]:
                out.append(Violation(i0, "depth-exceeds-distance", f"axis {a}"))
    return out


def _sorted_axes_per_vertex(parent: ExtendedCurve) -> list[tuple[list[int], set[int]]]:
    """For every parent vertex: the first d-2 axes in decreasing order of
    local edge distance, plus the unordered final pair (the two axes whose
    order the continuity rule decides; normally the incident edges' axes).

    Local distances are measured inside the extended block of 2^d vertices
    the vertex came from in the previous inflation; for a single-vertex
    parent the two incident edges pin the final pair and the remaining axes
    keep their natural order.
    """
    d = parent.dim
    K = parent.volume
    edges = parent.edge_list()
    out: list[tuple[list[int], set[int]]] = []
    if K == 1:
        pair = {axis_of(edges[0]), axis_of(edges[1])}
        if len(pair) != 2:
            raise InternalInvariantError("entry and exit edges of a root curve must differ in axis")
        prefix = [a for a in range(1, d + 1) if a not in pair]
        return [(prefix, pair)]
    D = 2 ** d
    if K % D != 0:
        raise DimensionMismatch("parent volume is not a multiple of 2^d; not built by inflation")
    for b in range(K // D):
        window = edges[b * D:(b + 1) * D + 1]
        slots_by_axis: dict[int, list[int]] = {a: [] for a in range(1, d + 1)}
        for t, e in enumerate(window):
            slots_by_axis[axis_of(e)].append(t)
        for p0 in range(D):
            p = p0 + 1
            ranked = sorted(
                ((_distance_to_edges(p, slots_by_axis[a]), a) for a in range(1, d + 1)),
                reverse=True)
            # ties are only allowed inside the final pair, whose order the
            # continuity rule fixes; a tie touching any earlier position
            # would make the sort ambiguous
            for t in range(d - 2):
                if ranked[t][0] == ranked[t + 1][0]:
                    raise InternalInvariantError(
                        f"tied edge distances at vertex {b * D + p0}; refusing to break the tie")
            prefix = [a for _, a in ranked[:d - 2]]
            pair = {ranked[d - 2][1], ranked[d - 1][1]}
            out.append((prefix, pair))
    return out


def derive_inflation_plan(
    parent: ExtendedCurve,
    entry_signs: tuple[int, ...],
) -> InflationPlan:
    """Derive the unique inflation plan whose permutations sort axes by
    decreasing local edge distance, with the last two positions and all
    signs fixed by the continuity rules.

    ``entry_signs[j-1]`` supplies the sign of the first permutation's
    inverse at axis j; the sign at the entry edge's axis must be positive.
    """
    d = parent.dim
    if len(entry_signs) != d or any(s not in (-1, 1) for s in entry_signs):
        raise ScheduleViolation("entry signs must be +1/-1, one per axis")
    edges = parent.edge_list()
    e0 = edges[0]
    signs = list(entry_signs)
    if signs[axis_of(e0) - 1] * sgn(e0) != 1:
        raise ScheduleViolation(f"schedule makes the entry edge {e0} arrive with negative sign")
    K = parent.volume
    axes_info = _sorted_axes_per_vertex(parent)
    perms: list[SignedPermutation] = []
    types: list[int] = []
    for i0 in range(K):
        prefix, pair = axes_info[i0]
        leave = edges[i0 + 1]
        la = axis_of(leave)
        if la not in pair:
            raise InternalInvariantError(
                f"leaving edge axis {la} not among the last two positions (vertex {i0})")
        other = (pair - {la}).pop()
        if signs[la - 1] * sgn(leave) == 1:
            second, last = other, la
        else:
            second, last = la, other
        order = prefix + [second, last]
        perm = SignedPermutation(tuple(signs[a - 1] * a for a in order))
        perms.append(perm)
        types.append(1 if last == la else 0)
        if i0 < K - 1:
            for j in range(1, d + 1):
                if (j == last) != (j == la):
                    signs[j - 1] = -signs[j - 1]
    return InflationPlan(tuple(perms), tuple(types))


def inflate(parent: ExtendedCurve, plan: InflationPlan) -> ExtendedCurve:
    """Replace every parent vertex with its planned Gray-code image and
    join the images with the parent's edges.

    Raises ContinuityViolation when the plan breaks a continuity condition;
    the resulting curve is materialized once to confirm unit steps and
    vertex uniqueness.
    """
    d = parent.dim
    K = parent.volume
    if len(plan.perms) != K:
        raise DimensionMismatch(f"plan has {len(plan.perms)} permutations for {K} vertices")
    edges = parent.edge_list()
    bad = validate_wellfolded_step(plan.perms, edges)
    if bad:
        v = bad[0]
        raise ContinuityViolation(v.index, v.condition, v.detail)
    g = gray_code(d).dirs
    verts = materialize(parent.body)
    first = plan.perms[0]
    entry = tuple(2 * c + flipped(first.inverse(j)) for j, c in enumerate(verts[0], start=1))
    dirs: list[int] = []
    for i0, perm in enumerate(plan.perms):
        dirs.extend(perm(e) for e in g)
        if i0 < K - 1:
            dirs.append(edges[i0 + 1])
    child = ExtendedCurve(AnchoredCurve(entry, tuple(dirs)), parent.entry_edge, parent.exit_edge)
    materialize(child.body)
    return child


def _schedule_signs(family: str, level: int, d: int) -> tuple[int, ...]:
    """Entry-sign schedule of the self-similar families.

    The corner family keeps every sign positive; the face family flips all
    axes below d on odd levels, which places the entry at the truncated
    binary expansion of 1/3 in those coordinates.  d = 2 always uses the
    corner schedule (both families coincide with the classic 2-D curve).
    """
    if family == FAMILY_HO_FACE and d >= 3 and level % 2 == 1:
        return tuple(-1 if j < d else 1 for j in range(1, d + 1))
    return (1,) * d


def build_ho_curve(spec: CurveSpec) -> BuiltCurve:
    """Build a self-similar hyperorthogonal well-folded curve by repeated
    plan derivation and inflation, keeping the per-level plans."""
    if spec.family not in HO_FAMILIES:
        raise UnsupportedFamily(f"build_ho_curve handles {HO_FAMILIES}, not {spec.family!r}")
    d = spec.d
    curve = root_curve(d)
    plans: list[InflationPlan] = []
    for level in range(spec.k):
        plan = derive_inflation_plan(curve, _schedule_signs(spec.family, level, d))
        curve = inflate(curve, plan)
        plans.append(plan)
    return BuiltCurve(spec, curve, tuple(plans))


def butz_level1_plan(d: int) -> InflationPlan:
    """Level-1 template of the classic rotation-based generalization: the
    final axis is 1 at both ends and the larger incident-edge axis in
    between, the rest of each permutation is the cyclic rotation following
    it, and signs are propagated through the continuity conditions."""
    if d < 2:
        raise UnsupportedDimension("curves need d >= 2")
    D = 2 ** d
    edges = [d, *gray_code(d).dirs, -(d - 1)]
    signs = [1] * d
    perms: list[SignedPermutation] = []
    types: list[int] = []
    for i in range(1, D + 1):
        if i == 1 or i == D:
            last = 1
        else:
            last = max(axis_of(edges[i - 1]), axis_of(edges[i]))
        order = [((last + j - 1) % d) + 1 for j in range(1, d + 1)]
        perm = SignedPermutation(tuple(signs[a - 1] * a for a in order))
        perms.append(perm)
        leave = edges[i]
        types.append(1 if axis_of(leave) == last else 0)
        if i < D:
            nxt = list(signs)
            for j in range(1, d + 1):
                if (j == last) != (j == axis_of(leave)):
                    nxt[j - 1] = -nxt[j - 1]
            if nxt[axis_of(leave) - 1] * sgn(leave) != 1:
                raise InternalContinuityFailure(
                    f"rotation template breaks the entry-sign rule at edge {i}")
            signs = nxt
        else:
            if (signs[axis_of(leave) - 1] * sgn(leave) == 1) != (last == axis_of(leave)):
                raise InternalContinuityFailure("rotation template breaks the exit-sign rule")
    return InflationPlan(tuple(perms), tuple(types))


def build_butz_moore(d: int, k: int) -> BuiltCurve:
    """Build the rotation-based baseline curve at level k.

    The curve is self-similar without reversals: every level concatenates
    the 2^d images of the previous level under the level-1 template.
    """
    spec = CurveSpec(d, FAMILY_BUTZ, k)
    plan = butz_level1_plan(d)
    cells = materialize(AnchoredCurve((0,) * d, gray_code(d).dirs))
    verts: list[Vertex] = [(0,) * d]
    for level in range(1, k + 1):
        side = 2 ** (level - 1)
        out: list[Vertex] = []
        for cell, perm in zip(cells, plan.perms):
            base = tuple(side * c for c in cell)
            out.extend(tuple(b + w for b, w in zip(base, transform_vertex(perm, v, side)))
                       for v in verts)
        verts = out
    dirs: list[int] = []
    for a, b in zip(verts, verts[1:]):
        delta = [y - x for x, y in zip(a, b)]
        nonzero = [(j, v) for j, v in enumerate(delta, start=1) if v != 0]
        if len(nonzero) != 1 or abs(nonzero[0][1]) != 1:
            raise InternalContinuityFailure(f"expansion produced a non-unit step {a} -> {b}")
        j, v = nonzero[0]
        dirs.append(j * v)
    body = AnchoredCurve(verts[0], tuple(dirs))
    vs = materialize(body)
    hi = 2 ** k - 1
    if len(vs) != 2 ** (d * k) or any(c < 0 or c > hi for v in vs for c in v):
        raise InternalContinuityFailure("expansion did not fill the level-k cube")
    return BuiltCurve(spec, ExtendedCurve(body, d, -(d - 1)), (plan,))


def build_curve(spec: CurveSpec) -> BuiltCurve:
    """Build any supported family at the requested level."""
    if spec.family == FAMILY_BUTZ:
        return build_butz_moore(spec.d, spec.k)
    return build_ho_curve(spec)


def _infer_perm(src_dirs, dst_dirs, d: int) -> SignedPermutation | None:
    """Signed permutation mapping one direction sequence onto another, or
    None when no consistent mapping exists."""
    img: dict[int, int] = {}
    for s, t in zip(src_dirs, dst_dirs):
        a = axis_of(s)
        val = t * sgn(s)
        if img.setdefault(a, val) != val:
            return None
    if len(img) != d:
        return None
    try:
        return SignedPermutation(tuple(img[a] for a in range(1, d + 1)))
    except DimensionMismatch:
        return None


def _dirs_of(verts: list[Vertex]) -> list[int] | None:
    """Edge directions of a vertex sequence, or None on a non-unit step."""
    out = []
    for a, b in zip(verts, verts[1:]):
        delta = [(y - x) for x, y in zip(a, b)]
        nz = [(j, v) for j, v in enumerate(delta, start=1) if v != 0]
        if len(nz) != 1 or abs(nz[0][1]) != 1:
            return None
        out.append(nz[0][0] * nz[0][1])
    return out


def decompose_self_similar(
    child: AnchoredCurve, parent: AnchoredCurve
) -> list[tuple[SignedPermutation, bool]]:
    """Split a curve into 2^d consecutive parent-sized blocks and return,
    per block, the isometry (and whether the parent must be reversed) that
    maps the parent onto it.  Raises NotSelfSimilar on the first block with
    no such isometry."""
    d = child.dim
    if parent.dim != d:
        raise DimensionMismatch("child and parent dimensions differ")
    cv = materialize(child)
    pv = materialize(parent)
    m = len(pv)
    if len(cv) != m * 2 ** d:
        raise DimensionMismatch(
            f"child has {len(cv)} vertices; expected {m} * 2^{d}")
    pmin = [min(v[j] for v in pv) for j in range(d)]
    prel = [tuple(c - o for c, o in zip(v, pmin)) for v in pv]
    parent_dirs = _dirs_of(prel)
    if parent_dirs is None:
        raise DimensionMismatch("parent is not a grid curve")
    side = max(max(v[j] for v in prel) for j in range(d)) + 1 if m > 1 else 1
    result: list[tuple[SignedPermutation, bool]] = []
    for b in range(2 ** d):
        seg = cv[b * m:(b + 1) * m]
        bmin = [min(v[j] for v in seg) for j in range(d)]
        brel = [tuple(c - o for c, o in zip(v, bmin)) for v in seg]
        if m == 1:
            result.append((SignedPermutation.identity(d), False))
            continue
        found = None
        for rev in (False, True):
            cand = brel if not rev else list(reversed(brel))
            cand_dirs = _dirs_of(cand)
            if cand_dirs is None:
                continue
            perm = _infer_perm(parent_dirs, cand_dirs, d)
            if perm is None:
                continue
            if all(transform_vertex(perm, v, side) == w for v, w in zip(prel, cand)):
                found = (perm, rev)
                break
        if found is None:
            raise NotSelfSimilar(b)
        result.append(found)
    return result


def curve_type(ext: ExtendedCurve) -> int:
    """Orientation type of an extended 1-curve that is an isometric image
    of the extended Gray-code curve: 0 when the final permutation axis is
    the entry edge's axis (plain isometry), 1 when it is the exit edge's
    axis (reversed image)."""
    d = ext.dim
    g = gray_code(d).dirs
    if len(ext.body.dirs) != len(g):
        raise NotAGrayImage(f"body has {len(ext.body.dirs)} edges; expected {len(g)}")
    perm = _infer_perm(g, ext.body.dirs, d)
    if perm is None or tuple(perm(e) for e in g) != ext.body.dirs:
        raise NotAGrayImage("body is not a signed-permutation image of the Gray-code curve")
    if ext.entry_edge == perm(d) and ext.exit_edge == -perm(d - 1):
        return 0
    if ext.entry_edge == perm(d - 1) and ext.exit_edge == perm(d):
        return 1
    raise NotAGrayImage("extension edges match neither orientation")


def child_blocks(curve: ExtendedCurve) -> list[ExtendedCurve]:
    """Split an inflated curve into its extended 1-curve blocks of 2^d
    vertices, each carrying the edges that connect it to its neighbours."""
    d = curve.dim
    D = 2 ** d
    K = curve.volume
    if K % D != 0:
        raise DimensionMismatch("curve volume is not a multiple of 2^d")
    verts = materialize(curve.body)
    edges = curve.edge_list()
    out = []
    for b in range(K // D):
        seg = verts[b * D:(b + 1) * D]
        dirs = tuple(edges[b * D + 1 + t] for t in range(D - 1))
        out.append(ExtendedCurve(AnchoredCurve(seg[0], dirs), edges[b * D], edges[(b + 1) * D]))
    return out


def relative_coords(v: Vertex) -> tuple[int, ...]:
    """Inside/outside classification of each coordinate within its 2-cube:
    0 for residues 0 and 3 mod 4 (outside), 1 for residues 1 and 2."""
    return tuple(0 if c % 4 in (0, 3) else 1 for c in v)


def wrap_permutation(d: int) -> SignedPermutation:
    """The axis relabeling that carries the last child's relative exit
    coordinates back to the first child's relative entry coordinates:
    1 -> d-1, interior axes fixed, d-1 -> d, d -> 1."""
    img = [d - 1] + list(range(2, d - 1)) + [d, 1]
    return SignedPermutation(tuple(img))


def write_curve(stream, spec: CurveSpec, vertices: list[Vertex]) -> None:
    """Write the curve export format: header ``d k family``, then one
    vertex per line as space-separated integers in curve order."""
    stream.write(f"{spec.d} {spec.k} {spec.family}\n")
    for v in vertices:
        stream.write(" ".join(str(c) for c in v) + "\n")


def read_curve(stream) -> tuple[CurveSpec, list[Vertex]]:
    header = stream.readline()
    parts = header.split()
    if len(parts) != 3:
        raise ParseError("curve file header must be 'd k family'", line=1)
    try:
        d, k = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError("curve file header must start with two integers", line=1) from None
    spec = CurveSpec(d, parts[2], k)
    verts: list[Vertex] = []
    for lineno, line in enumerate(stream, start=2):
        if not line.strip():
            continue
        try:
            v = tuple(int(x) for x in line.split())
        except ValueError:
            raise ParseError("vertex line must hold integers", line=lineno) from None
        if len(v) != d:
            raise ParseError(f"vertex has {len(v)} coordinates; expected {d}", line=lineno)
        verts.append(v)
    return spec, verts
