"""Reflected Gray-code curves and their structural facts."""

import itertools
import math
import random

import pytest

from hocurve.analysis import check_hyperorthogonal
from hocurve.core import (
    AnchoredCurve,
    FreeCurve,
    SignedPermutation,
    apply_perm,
    materialize,
    reverse,
)
from hocurve.gray import (
    check_alternation,
    extended_gray,
    gray_code,
    gray_entry_exit,
    gray_rank_vertex,
    prefix_axes,
)


def recursive_gray(d):
    """Independent construction straight from the recurrence."""
    if d == 0:
        return FreeCurve(())
    prev = recursive_gray(d - 1)
    return FreeCurve(prev.dirs + (d,) + reverse(prev).dirs)


def test_base_cases():
    assert gray_code(0) == FreeCurve(())
    assert gray_code(2) == FreeCurve((1, 2, -1))


def test_materialization_scale_guard():
    from hocurve.errors import UnsupportedDimension
    with pytest.raises(UnsupportedDimension):
        gray_code(17)


def test_frozen_d4_direction_list():
    assert gray_code(4).dirs == (1, 2, -1, 3, 1, -2, -1, 4, 1, 2, -1, -3, 1, -2, -1)


@pytest.mark.parametrize("d", range(0, 9))
def test_matches_recursive_definition(d):
    assert gray_code(d) == recursive_gray(d)


@pytest.mark.parametrize("d", range(1, 9))
def test_length_and_cube_cover(d):
    g = gray_code(d)
    assert len(g) == 2 ** d - 1
    verts = materialize(AnchoredCurve((0,) * d, g.dirs))
    assert set(verts) == set(itertools.product((0, 1), repeat=d))
    assert verts[-1] == (0,) * (d - 1) + (1,)
    assert [gray_rank_vertex(r, d) for r in range(2 ** d)] == verts


@pytest.mark.parametrize("d", range(2, 7))
def test_axis_one_alternation(d):
    assert check_alternation(gray_code(d))
    assert check_alternation(reverse(gray_code(d)))


def test_alternation_rejects_collinear_pair():
    assert not check_alternation(FreeCurve((1, 1)))
    assert not check_alternation(FreeCurve((1, 2)))


def test_prefix_axes_examples():
    assert prefix_axes(3, 1) == {1}
    assert prefix_axes(3, 4) == {1, 2, 3}
    assert prefix_axes(4, 3) == {1, 2}
    assert prefix_axes(4, 3) == set(abs(e) for e in gray_code(4).dirs[:3])


@pytest.mark.parametrize("d", range(2, 9))
def test_prefix_and_suffix_axes_formula(d):
    dirs = gray_code(d).dirs
    for n in range(1, 2 ** d):
        want = set(range(1, 1 + math.ceil(math.log2(n + 1))))
        assert prefix_axes(d, n) == want
        assert set(abs(e) for e in dirs[:n]) == want
        assert set(abs(e) for e in dirs[-n:]) == want


@pytest.mark.parametrize("d", range(2, 7))
def test_reversal_equals_reflection_in_last_axis(d):
    g = gray_code(d)
    rev = materialize(AnchoredCurve((0,) * (d - 1) + (1,), reverse(g).dirs))
    reflected = [v[:-1] + (1 - v[-1],) for v in materialize(AnchoredCurve((0,) * d, g.dirs))]
    assert rev == reflected


@pytest.mark.parametrize("d", range(2, 7))
def test_gray_curve_is_hyperorthogonal(d):
    assert check_hyperorthogonal(AnchoredCurve((0,) * d, gray_code(d).dirs), d).ok


def test_extended_gray_shape():
    e3 = extended_gray(3)
    assert e3.entry_edge == 3
    assert e3.body.dirs == (1, 2, -1, 3, 1, -2, -1)
    assert e3.exit_edge == -2
    e2 = extended_gray(2)
    assert (e2.entry_edge, e2.body.dirs, e2.exit_edge) == (2, (1, 2, -1), -1)
    for d in range(2, 8):
        assert len(extended_gray(d).body.dirs) == 2 ** d - 1


def test_entry_exit_identity():
    entry, exit_v, orientation = gray_entry_exit(SignedPermutation.identity(4))
    assert entry == (0, 0, 0, 0)
    assert exit_v == (0, 0, 0, 1)
    assert orientation == 4


def test_entry_exit_2d_example():
    entry, exit_v, orientation = gray_entry_exit(SignedPermutation((2, -1)))
    assert entry == (1, 0)
    assert exit_v == (0, 0)
    assert orientation == -1


@pytest.mark.parametrize("d", range(2, 9))
def test_entry_exit_against_materialization(d):
    rng = random.Random(d)
    for _ in range(20):
        axes = list(range(1, d + 1))
        rng.shuffle(axes)
        perm = SignedPermutation(tuple(rng.choice((-1, 1)) * a for a in axes))
        entry, exit_v, orientation = gray_entry_exit(perm)
        dirs = apply_perm(perm, gray_code(d)).dirs
        verts = materialize(AnchoredCurve(entry, dirs))
        assert set(verts) == set(itertools.product((0, 1), repeat=d))
        assert verts[-1] == exit_v
        delta = tuple(b - a for a, b in zip(entry, exit_v))
        axis = abs(orientation)
        assert delta[axis - 1] == (1 if orientation > 0 else -1)
        assert all(x == 0 for i, x in enumerate(delta, start=1) if i != axis)
