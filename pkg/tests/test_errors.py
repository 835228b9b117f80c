"""Error contracts across module boundaries."""

import io

import pytest

from hocurve.construction import (
    CurveSpec,
    FAMILY_HO_ORIGIN,
    InflationPlan,
    build_ho_curve,
    decompose_self_similar,
    inflate,
    local_edge_distance,
    read_curve,
    root_curve,
)
from hocurve.core import AnchoredCurve, SignedPermutation, apply_perm
from hocurve.errors import (
    DimensionMismatch,
    ParseError,
    UnsupportedFamily,
)
from hocurve.gray import extended_gray
from hocurve.spatial import BINARY_FORMAT, load_points


def test_curve_spec_validation():
    with pytest.raises(UnsupportedFamily):
        CurveSpec(3, "zigzag", 1)
    with pytest.raises(DimensionMismatch):
        CurveSpec(3, FAMILY_HO_ORIGIN, -1)
    with pytest.raises(DimensionMismatch):
        CurveSpec(3, FAMILY_HO_ORIGIN, 63)


def test_apply_perm_dimension_checks():
    perm = SignedPermutation((2, 1))
    with pytest.raises(DimensionMismatch):
        apply_perm(perm, 3)
    with pytest.raises(DimensionMismatch):
        apply_perm(perm, (0, 1, 0))
    with pytest.raises(TypeError):
        apply_perm(perm, "north")


def test_extended_gray_needs_two_dimensions():
    with pytest.raises(DimensionMismatch):
        extended_gray(1)


def test_local_edge_distance_input_checks():
    ext = extended_gray(3)
    with pytest.raises(DimensionMismatch):
        local_edge_distance(ext, (9, 9, 9), 1)
    with pytest.raises(DimensionMismatch):
        local_edge_distance(ext, (0, 0, 0), 4)


def test_inflate_plan_size_mismatch():
    parent = root_curve(3)
    plan = InflationPlan((SignedPermutation.identity(3),) * 2, (0, 0))
    with pytest.raises(DimensionMismatch):
        inflate(parent, plan)


def test_decompose_size_mismatch():
    b1 = build_ho_curve(CurveSpec(2, FAMILY_HO_ORIGIN, 1)).curve.body
    with pytest.raises(DimensionMismatch):
        decompose_self_similar(AnchoredCurve((0, 0), (1,)), b1)


def test_read_curve_error_paths():
    with pytest.raises(ParseError):
        read_curve(io.StringIO("3 2\n"))
    with pytest.raises(ParseError):
        read_curve(io.StringIO("x 2 ho-origin\n"))
    with pytest.raises(UnsupportedFamily):
        read_curve(io.StringIO("3 2 zigzag\n"))
    with pytest.raises(ParseError):
        read_curve(io.StringIO("2 1 ho-origin\n0 0\n0 zero\n"))
    with pytest.raises(ParseError):
        read_curve(io.StringIO("2 1 ho-origin\n0 0 0\n"))


def test_binary_points_empty_and_truncated():
    assert load_points(io.BytesIO(b""), BINARY_FORMAT) == []
    with pytest.raises(ParseError):
        load_points(io.BytesIO(b"\x03\x00"), BINARY_FORMAT)
    import struct
    blob = struct.pack("<IQ", 2, 3) + b"\x00" * 16  # promises 3 points, holds 1
    with pytest.raises(ParseError):
        load_points(io.BytesIO(blob), BINARY_FORMAT)


def test_unknown_point_format():
    with pytest.raises(ParseError):
        load_points(io.StringIO(""), "xml")
