"""Bounding-box quality analysis and structural verification.

The box-to-curve ratio (BCR) of a contiguous section of a grid curve is
the volume of the section's axis-aligned bounding box divided by the
number of cells the section covers.  Because a space-filling curve fills
each cell within that cell's time slot, cell-aligned sections are genuine
sections of the limit curve, so the exhaustive scan below yields exact
lower bounds on the worst-case ratio.

All ratios are exact rationals; floats appear only in the float-keyed
argmax inside the scanner, whose winner is re-verified with integer
arithmetic before being accepted.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .construction import (
    CurveSpec,
    ExtendedCurve,
    FAMILY_BUTZ,
    FAMILY_HO_FACE,
    FAMILY_HO_ORIGIN,
    build_butz_moore,
    build_curve,
    butz_level1_plan,
    _infer_perm,
)
from .core import (
    AnchoredCurve,
    Vertex,
    axis_of,
    materialize,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    IndexOutOfRange,
    SectionNotFound,
)
from .gray import gray_code

# Exhaustive scans are O(N^2); past 2^16 cells that is billions of ranges.
DEFAULT_CELL_BUDGET = 1 << 16


@dataclass(frozen=True)
class BcrReport:
    """Worst cell-aligned section ratio of one curve, the 0-based inclusive
    range attaining it, the curve's refinement level (when the vertex count
    is a cube power), and the per-level series that led here."""

    worst_ratio: Fraction
    range: tuple[int, int]
    level: int | None
    series: tuple[Fraction, ...]


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    detail: str = ""
    location: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _vertices_of(curve) -> list[Vertex]:
    if isinstance(curve, ExtendedCurve):
        return materialize(curve.body)
    if isinstance(curve, AnchoredCurve):
        return materialize(curve)
    return list(curve)


def section_bcr(curve, i: int, j: int) -> Fraction:
    """Exact bounding-box volume of cells i..j (inclusive) divided by the
    cell count."""
    verts = _vertices_of(curve)
    n = len(verts)
    if not 0 <= i <= j < n:
        raise IndexOutOfRange(f"range {i}..{j} outside 0..{n - 1}")
    seg = verts[i:j + 1]
    d = len(seg[0])
    vol = 1
    for a in range(d):
        cs = [v[a] for v in seg]
        vol *= max(cs) - min(cs) + 1
    return Fraction(vol, j - i + 1)


def _scan_starts(arr: np.ndarray, starts: range) -> tuple[int, int, int, int]:
    """Best (volume, length, i, j) over all ranges beginning at the given
    starts.  Float argmax proposes a winner per start; an integer
    cross-multiplication pass promotes any strictly better candidate, so
    the result is exact."""
    n = len(arr)
    best = (1, 1, starts.start if len(starts) else 0, starts.start if len(starts) else 0)
    for i in starts:
        suf = arr[i:]
        mx = np.maximum.accumulate(suf, axis=0)
        mn = np.minimum.accumulate(suf, axis=0)
        vol = (mx - mn + 1).prod(axis=1)
        lens = np.arange(1, n - i + 1, dtype=np.int64)
        j = int(np.argmax(vol / lens))
        while True:
            better = np.nonzero(vol * int(lens[j]) > int(vol[j]) * lens)[0]
            if len(better) == 0:
                break
            j = int(better[0])
        cand = (int(vol[j]), int(lens[j]), i, i + j)
        if (cand[0] * best[1], -cand[2], -cand[3]) > (best[0] * cand[1], -best[2], -best[3]):
            best = cand
    return best


def worst_case_bcr(curve, *, allow_big: bool = False, threads: int = 1) -> BcrReport:
    """Exact maximum of section_bcr over all O(N^2) cell-aligned ranges.

    Runs an incremental per-start sweep that maintains the running bounding
    box; refuses more than 2^16 cells unless ``allow_big`` is set.  The
    scan may be sharded over range starts with ``threads``.
    """
    verts = _vertices_of(curve)
    n = len(verts)
    if n > DEFAULT_CELL_BUDGET and not allow_big:
        raise BudgetExceeded(
            f"{n} cells means ~{n * (n - 1) // 2} ranges; pass allow_big to proceed")
    d = len(verts[0])
    if n == 1:
        return BcrReport(Fraction(1), (0, 0), 0, (Fraction(1),))
    arr = np.asarray(verts, dtype=np.int64)
    threads = max(1, threads)
    if threads == 1:
        vol, length, i, j = _scan_starts(arr, range(n))
    else:
        chunk = (n + threads - 1) // threads
        ranges = [range(t * chunk, min(n, (t + 1) * chunk)) for t in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda r: _scan_starts(arr, r), ranges))
        vol, length, i, j = max(
            results, key=lambda c: (Fraction(c[0], c[1]), -c[2], -c[3]))
    ratio = Fraction(vol, length)
    level = None
    bits = n.bit_length() - 1
    if n == 1 << bits and bits % d == 0:
        level = bits // d
    return BcrReport(ratio, (i, j), level, (ratio,))


def bcr_series(
    d: int,
    family: str,
    kmax: int,
    *,
    allow_big: bool = False,
    threads: int = 1,
) -> BcrReport:
    """Worst-case BCR of the family's curves at levels 1..kmax; the report
    carries the final level's answer plus the whole series."""
    series: list[Fraction] = []
    last: BcrReport | None = None
    for k in range(1, kmax + 1):
        built = build_curve(CurveSpec(d, family, k))
        last = worst_case_bcr(built.curve, allow_big=allow_big, threads=threads)
        series.append(last.worst_ratio)
    if last is None:
        return BcrReport(Fraction(1), (0, 0), 0, (Fraction(1),))
    return BcrReport(last.worst_ratio, last.range, last.level, tuple(series))


def check_hyperorthogonal(curve, d: int | None = None) -> CheckResult:
    """Verify that every window of 2^n consecutive edges (n <= d-2) uses
    exactly n+1 distinct axes; entry and exit edges participate when an
    extended curve is given.  Returns the first offending window."""
    if isinstance(curve, ExtendedCurve):
        edges = curve.edge_list()
        d = d or curve.dim
    elif isinstance(curve, AnchoredCurve):
        edges = list(curve.dirs)
        d = d or curve.dim
    else:
        edges = list(curve)
        if d is None:
            raise DimensionMismatch("d required for a bare edge list")
    axes = [axis_of(e) for e in edges]
    for n in range(0, d - 1):
        w = 1 << n
        if w > len(axes):
            break
        counts = [0] * (d + 1)
        distinct = 0
        for t, a in enumerate(axes):
            if counts[a] == 0:
                distinct += 1
            counts[a] += 1
            if t >= w:
                old = axes[t - w]
                counts[old] -= 1
                if counts[old] == 0:
                    distinct -= 1
            if t >= w - 1 and distinct != n + 1:
                start = t - w + 1
                return CheckResult(
                    False,
                    f"window of {w} edges at {start} uses {distinct} axes, wanted {n + 1}",
                    (n, start),
                )
    return CheckResult(True)


def check_wellfolded(curve, d: int | None = None) -> CheckResult:
    """Verify that the curve arises from repeated inflation: every
    consecutive block of 2^d vertices occupies one unit subcube as a
    signed-permutation image of the Gray-code 1-curve, recursively down to
    a single vertex after coarsening."""
    verts = _vertices_of(curve)
    if d is None:
        d = len(verts[0])
    D = 1 << d
    g = gray_code(d).dirs
    level = 0
    while len(verts) > 1:
        if len(verts) % D != 0:
            return CheckResult(False, f"{len(verts)} vertices is not a multiple of 2^{d}")
        parents: list[Vertex] = []
        for b in range(len(verts) // D):
            seg = verts[b * D:(b + 1) * D]
            corner = tuple(min(v[a] for v in seg) for a in range(d))
            if any(c % 2 for c in corner):
                return CheckResult(False, f"block {b} not aligned to an even corner", (level, b))
            if any(v[a] - corner[a] not in (0, 1) for v in seg for a in range(d)):
                return CheckResult(False, f"block {b} leaves its unit subcube", (level, b))
            dirs = []
            ok = True
            for u, w in zip(seg, seg[1:]):
                delta = [y - x for x, y in zip(u, w)]
                nz = [(a + 1, v) for a, v in enumerate(delta) if v != 0]
                if len(nz) != 1 or abs(nz[0][1]) != 1:
                    ok = False
                    break
                dirs.append(nz[0][0] * nz[0][1])
            perm = _infer_perm(g, dirs, d) if ok else None
            if perm is None or tuple(perm(e) for e in g) != tuple(dirs):
                return CheckResult(
                    False, f"block {b} is not a signed-permutation image of the 1-curve",
                    (level, b))
            parents.append(tuple(c // 2 for c in corner))
        if len(set(parents)) != len(parents):
            return CheckResult(False, "coarsened curve revisits a subcube", (level,))
        verts = parents
        level += 1
    return CheckResult(True)


def check_window_extents(curve, d: int | None = None) -> CheckResult:
    """Verify that every window of 2^n consecutive edges (n <= d-2) fits in
    a unit cube of n+1 dimensions: no axis extent above one cell."""
    if isinstance(curve, ExtendedCurve):
        verts = materialize(curve.body)
        d = d or curve.dim
    else:
        verts = _vertices_of(curve)
        d = d or len(verts[0])
    arr = np.asarray(verts, dtype=np.int64)
    for n in range(0, d - 1):
        w = (1 << n) + 1
        if w > len(arr):
            break
        for start in range(len(arr) - w + 1):
            win = arr[start:start + w]
            ext = win.max(axis=0) - win.min(axis=0)
            if int(ext.max()) > 1:
                return CheckResult(
                    False, f"window of {w - 1} edges at {start} spans more than a unit cube",
                    (n, start))
    return CheckResult(True)


def check_long_sections_span(curve, d: int | None = None) -> CheckResult:
    """Verify that every section anchored at the curve's entry or exit and
    covering at least a fraction 2^(d-1)/(2^d - 1) of the cells has the
    full cube as its bounding box.

    The anchored form is what the closed-form bound arguments rest on
    (last cells of one child, first cells of the next); the unanchored
    variant is false: an interior section can trade both clipped ends into
    the same half of the cube (e.g. cells 2..12 of the 2-D level-2 curve
    cover 11/16 >= 2/3 with a 3x4 box).
    """
    verts = _vertices_of(curve)
    if d is None:
        d = len(verts[0])
    n = len(verts)
    arr = np.asarray(verts, dtype=np.int64)
    full_lo = arr.min(axis=0)
    full_hi = arr.max(axis=0)
    thr = -(-n * 2 ** (d - 1) // (2 ** d - 1))  # ceil
    for rev in (False, True):
        seq = arr[::-1] if rev else arr
        mx = np.maximum.accumulate(seq, axis=0)
        mn = np.minimum.accumulate(seq, axis=0)
        good = np.all(mx == full_hi, axis=1) & np.all(mn == full_lo, axis=1)
        bad = np.nonzero(~good[thr - 1:])[0]
        if len(bad):
            m = thr + int(bad[0])
            loc = (n - m, n - 1) if rev else (0, m - 1)
            return CheckResult(False, "anchored long section with partial bounding box", loc)
    return CheckResult(True)


def lower_bound_face_continuous(d: int) -> Fraction:
    """Worst-case BCR every face-continuous cube-refinement curve must
    reach: 4 - 16/(2^d + 3).  For d = 2 a stronger bound of 2 is known and
    reported by callers alongside this value."""
    if d < 2:
        raise DimensionMismatch("bound defined for d >= 2")
    return Fraction(4) - Fraction(16, 2 ** d + 3)


def lower_bound_diagonal(d: int) -> Fraction:
    """Worst-case BCR every curve with a diagonal step must reach:
    4 - 4/2^d."""
    if d < 2:
        raise DimensionMismatch("bound defined for d >= 2")
    return Fraction(4) - Fraction(4, 2 ** d)


def _meets_butz_bound(ratio: Fraction, d: int) -> bool:
    """ratio >= 2^(d-1) / (2^(d/2) + 2), exactly (d may be odd)."""
    num, den = ratio.numerator, ratio.denominator
    # num/den >= 2^(d-1)/(2^(d/2)+2)  <=>  num*2^(d/2) >= den*2^(d-1) - 2*num
    rhs = den * 2 ** (d - 1) - 2 * num
    if rhs <= 0:
        return True
    if d % 2 == 0:
        return num * 2 ** (d // 2) >= rhs
    return num * num * 2 ** d >= rhs * rhs


def butz_bad_section(d: int, k: int) -> tuple[tuple[int, int], Fraction]:
    """Locate the high-ratio section of the rotation-based curve: the two
    adjacent child-image halves around an edge where the final axes jump
    from 2 to 2 + floor(d/2), scaled from level 2 up to level k.  Returns
    the 0-based inclusive cell range and its exact ratio, after asserting
    the ratio meets 2^(d-1)/(2^(d/2) + 2)."""
    if d < 3:
        raise DimensionMismatch("the construction needs d >= 3")
    if k < 2:
        raise DimensionMismatch("the section exists from level 2 upward")
    plan = butz_level1_plan(d)
    g = gray_code(d).dirs
    target = 2 + d // 2
    pivot = None
    for i in range(1, 2 ** d):
        e = g[i - 1]
        if (axis_of(plan.perms[i - 1](d)) == 2 and axis_of(e) == 1
                and axis_of(plan.perms[i](d)) == target):
            pivot = i
            break
    if pivot is None:
        raise SectionNotFound("no child pair with the rotated final axes was found")
    h = 2 ** (d // 2 - 1)
    scale = 2 ** (d * (k - 2))
    start = (pivot * 2 ** d - h - 1) * scale
    end = (pivot * 2 ** d + h + 1) * scale - 1
    built = build_butz_moore(d, k)
    ratio = section_bcr(built.curve, start, end)
    if not _meets_butz_bound(ratio, d):
        raise SectionNotFound(
            f"located section has ratio {ratio}, below the guaranteed bound")
    return (start, end), ratio


@dataclass(frozen=True)
class TableRow:
    label: str
    kind: str  # "bound" or "measured"
    values: dict[int, Fraction | None]


def table_report(
    dims: Sequence[int],
    levels: dict[int, int],
    families: Sequence[str] = (FAMILY_HO_ORIGIN, FAMILY_HO_FACE, FAMILY_BUTZ),
    *,
    allow_big: bool = False,
    threads: int = 1,
) -> list[TableRow]:
    """Worst-case ratio table: closed-form bound rows plus measured rows
    for every requested family, at the per-dimension levels given.  A
    dimension missing from ``levels`` gets bound rows only."""
    dims = sorted(dims)
    rows: list[TableRow] = []
    rows.append(TableRow(
        "lower bound, face-continuous", "bound",
        {d: lower_bound_face_continuous(d) for d in dims}))
    measured: dict[str, dict[int, Fraction | None]] = {f: {} for f in families}
    for d in dims:
        kmax = levels.get(d)
        for fam in families:
            if kmax is None:
                measured[fam][d] = None
            else:
                report = bcr_series(d, fam, kmax, allow_big=allow_big, threads=threads)
                measured[fam][d] = report.worst_ratio
    for fam in families:
        if fam == FAMILY_BUTZ:
            continue
        rows.append(TableRow(fam, "measured", measured[fam]))
    rows.append(TableRow(
        "lower bound, non-face-continuous", "bound",
        {d: lower_bound_diagonal(d) for d in dims}))
    if FAMILY_BUTZ in families:
        rows.append(TableRow(FAMILY_BUTZ, "measured", measured[FAMILY_BUTZ]))
    return rows


def format_ratio(x: Fraction | None, exact: bool = False) -> str:
    """Render a ratio: ``num/den`` when exact, otherwise truncated to two
    decimals (the convention the reference table uses)."""
    if x is None:
        return "-"
    if exact:
        return f"{x.numerator}/{x.denominator}"
    scaled = (x.numerator * 100) // x.denominator
    return f"{scaled // 100}.{scaled % 100:02d}"
