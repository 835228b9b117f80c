"""Point files, curve-ordered bulk loading, and block queries."""

import io
import random
from fractions import Fraction

import pytest

from hocurve.construction import CurveSpec, FAMILY_HO_ORIGIN
from hocurve.errors import CoordinateOutOfRange, ParseError
from hocurve.order import FixedPoint, sort_points
from hocurve.spatial import (
    BINARY_FORMAT,
    Block,
    POINT_PRECISION,
    PointRecord,
    block_stats,
    bulk_load,
    load_points,
    query_box,
    query_sphere,
    write_points,
)

SPEC3 = CurveSpec(3, FAMILY_HO_ORIGIN, 1)
SPEC2 = CurveSpec(2, FAMILY_HO_ORIGIN, 1)


def random_records(rng, n, d):
    return [PointRecord(i, FixedPoint(tuple(rng.getrandbits(POINT_PRECISION)
                                            for _ in range(d)), POINT_PRECISION))
            for i in range(n)]


def test_empty_file_gives_no_points():
    assert load_points(io.StringIO("")) == []
    assert load_points(io.StringIO("# just a comment\n\n")) == []


def test_dyadic_bit_patterns():
    pts = load_points(io.StringIO("0.5,0.25\n"))
    assert len(pts) == 1
    assert pts[0].coords.coords == (1 << 63, 1 << 62)


def test_parse_errors():
    with pytest.raises(ParseError):
        load_points(io.StringIO("0.5,x\n"))
    with pytest.raises(ParseError):
        load_points(io.StringIO("0.5,0.5\n0.5\n"))
    with pytest.raises(CoordinateOutOfRange):
        load_points(io.StringIO("1.0,0.5\n"))


def test_csv_binary_csv_roundtrip():
    rng = random.Random(3)
    records = random_records(rng, 20, 3)
    csv1 = io.StringIO()
    write_points(records, csv1)
    csv1.seek(0)
    again = load_points(csv1)
    binary = io.BytesIO()
    write_points(again, binary, BINARY_FORMAT)
    binary.seek(0)
    third = load_points(binary, BINARY_FORMAT)
    csv2 = io.StringIO()
    write_points(third, csv2)
    assert csv1.getvalue() == csv2.getvalue()
    assert [r.coords for r in third] == [r.coords for r in records]


def test_single_block_when_n_below_capacity():
    rng = random.Random(4)
    records = random_records(rng, 5, 3)
    blocks = bulk_load(records, 8, SPEC3)
    assert len(blocks) == 1
    assert sorted(blocks[0].ids) == [0, 1, 2, 3, 4]
    for j in range(3):
        vals = [r.coords.value(j + 1) for r in records]
        assert blocks[0].lo[j] == min(vals)
        assert blocks[0].hi[j] == max(vals)


def test_bulk_load_partitions_in_curve_order():
    rng = random.Random(5)
    records = random_records(rng, 100, 3)
    B = 7
    blocks = bulk_load(records, B, SPEC3)
    assert [b.size for b in blocks] == [7] * 14 + [2]
    flat = [i for b in blocks for i in b.ids]
    assert sorted(flat) == list(range(100))
    order = sort_points([r.coords for r in records], SPEC3)
    assert flat == order


def test_groups_of_three_on_grid_sample():
    # nine grid points, capacity three: consecutive curve runs of three
    coords = [FixedPoint((x * 2 ** 61, y * 2 ** 61), POINT_PRECISION)
              for x in range(1, 4) for y in range(1, 4)]
    records = [PointRecord(i, c) for i, c in enumerate(coords)]
    blocks = bulk_load(records, 3, SPEC2)
    assert [b.size for b in blocks] == [3, 3, 3]


def test_blocks_of_cell_centers_are_child_cubes():
    # 2^(dk) cell centers with capacity 2^d: every block is exactly the
    # set of centers of one child cube, so all boxes span one cell width
    d, k = 3, 2
    from hocurve.construction import build_ho_curve
    verts = build_ho_curve(CurveSpec(d, FAMILY_HO_ORIGIN, k)).vertices()
    prec = k + 1
    records = [PointRecord(i, FixedPoint(tuple((c << 1) | 1 for c in v), prec))
               for i, v in enumerate(verts)]
    blocks = bulk_load(records, 2 ** d, CurveSpec(d, FAMILY_HO_ORIGIN, 1))
    cell = Fraction(1, 2 ** k)
    for b in blocks:
        assert b.size == 2 ** d
        for lo, hi in zip(b.lo, b.hi):
            assert hi - lo == cell
        assert b.volume == cell ** d


def brute_box(blocks, lo, hi):
    out = []
    for i, b in enumerate(blocks):
        if all(not (h < bl or l > bh)
               for l, h, bl, bh in zip(lo, hi, b.lo, b.hi)):
            out.append(i)
    return out


def brute_sphere(blocks, c, r):
    out = []
    for i, b in enumerate(blocks):
        s = Fraction(0)
        for cj, bl, bh in zip(c, b.lo, b.hi):
            gap = max(Fraction(0), bl - cj, cj - bh)
            s += gap * gap
        if s <= r * r:
            out.append(i)
    return out


def test_query_oracles_random():
    rng = random.Random(6)
    records = random_records(rng, 200, 3)
    blocks = bulk_load(records, 16, SPEC3)
    for _ in range(100):
        lo = [Fraction(rng.randrange(0, 900), 1000) for _ in range(3)]
        hi = [l + Fraction(rng.randrange(0, 1000 - int(l * 1000)), 1000) for l in lo]
        assert query_box(blocks, lo, hi) == brute_box(blocks, lo, hi)
        c = [Fraction(rng.randrange(0, 1000), 1000) for _ in range(3)]
        r = Fraction(rng.randrange(0, 500), 1000)
        assert query_sphere(blocks, c, r) == brute_sphere(blocks, c, r)


def test_query_box_trivia():
    rng = random.Random(8)
    records = random_records(rng, 64, 3)
    blocks = bulk_load(records, 8, SPEC3)
    all_ids = list(range(len(blocks)))
    assert query_box(blocks, (0, 0, 0), (1, 1, 1)) == all_ids
    assert query_box(blocks, (2, 2, 2), (3, 3, 3)) == []
    assert 0 in query_box(blocks, blocks[0].lo, blocks[0].hi)


def test_query_sphere_trivia():
    rng = random.Random(9)
    records = random_records(rng, 64, 3)
    blocks = bulk_load(records, 8, SPEC3)
    inside = tuple((lo + hi) / 2 for lo, hi in zip(blocks[0].lo, blocks[0].hi))
    assert 0 in query_sphere(blocks, inside, 0)
    assert 0 in query_sphere(blocks, blocks[0].lo, 0)  # corner inclusive
    assert query_sphere(blocks, (0, 0, 0), 2) == list(range(len(blocks)))


def test_block_stats_degenerate():
    one = Block((0,), (Fraction(1, 2),), (Fraction(1, 2),))
    s = block_stats([one])
    assert s.count == 1 and s.total_volume == 0.0 and s.max_volume == 0.0
    two = [Block((0,), (Fraction(0),), (Fraction(0),)),
           Block((1,), (Fraction(1, 2),), (Fraction(1, 2),))]
    assert block_stats(two).total_volume == 0.0
    assert block_stats([]).count == 0


def test_curve_order_beats_slabs_on_query_cost_not_raw_volume():
    # lexicographic slabs tile the cube, so they win on raw box volume;
    # the curve order wins once boxes are expanded by a query window,
    # which is what block fetches per query actually scale with
    rng = random.Random(20240817)
    records = random_records(rng, 2000, 3)
    blocks_ho = bulk_load(records, 64, SPEC3)
    order = sorted(range(len(records)), key=lambda i: records[i].coords.coords)
    blocks_lex = []
    for s in range(0, len(records), 64):
        group = [records[i] for i in order[s:s + 64]]
        lo = tuple(min(g.coords.value(j) for g in group) for j in range(1, 4))
        hi = tuple(max(g.coords.value(j) for g in group) for j in range(1, 4))
        blocks_lex.append(Block(tuple(g.id for g in group), lo, hi))

    def expanded_cost(blocks, q):
        total = Fraction(0)
        for b in blocks:
            c = Fraction(1)
            for lo, hi in zip(b.lo, b.hi):
                c *= (hi - lo) + q
            total += c
        return total

    vol_ho = block_stats(blocks_ho).total_volume
    vol_lex = block_stats(blocks_lex).total_volume
    assert vol_lex < vol_ho  # slabs are near-perfect boxes by volume
    q = Fraction(1, 10)
    assert expanded_cost(blocks_ho, q) < Fraction(4, 5) * expanded_cost(blocks_lex, q)
