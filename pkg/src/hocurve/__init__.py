"""Hyperorthogonal well-folded space-filling curves.

Construction of the self-similar curve families with bounded box-to-curve
ratio, a streaming point comparator, exhaustive worst-case ratio analysis,
and curve-ordered bulk loading of spatial blocks.
"""

from .core import (
    AnchoredCurve,
    Box,
    FreeCurve,
    SignedPermutation,
    apply_perm,
    bounding_box,
    compose,
    invert,
    materialize,
    perm_depth,
    reverse,
)
from .gray import (
    check_alternation,
    extended_gray,
    gray_code,
    gray_entry_exit,
    prefix_axes,
)
from .construction import (
    BuiltCurve,
    CurveSpec,
    ExtendedCurve,
    FAMILIES,
    FAMILY_BUTZ,
    FAMILY_HO_FACE,
    FAMILY_HO_ORIGIN,
    HO_FAMILIES,
    InflationPlan,
    build_butz_moore,
    build_curve,
    build_ho_curve,
    curve_type,
    decompose_self_similar,
    derive_inflation_plan,
    inflate,
    local_edge_distance,
    read_curve,
    validate_hyperorthogonal_step,
    validate_wellfolded_step,
    write_curve,
)
from .order import (
    FixedPoint,
    compare,
    index_vertex,
    sort_points,
    vertex_index,
)
from .analysis import (
    BcrReport,
    butz_bad_section,
    bcr_series,
    check_hyperorthogonal,
    check_wellfolded,
    lower_bound_diagonal,
    lower_bound_face_continuous,
    section_bcr,
    table_report,
    worst_case_bcr,
)
from .spatial import (
    Block,
    PointRecord,
    block_stats,
    bulk_load,
    load_points,
    query_box,
    query_sphere,
    write_points,
)

__version__ = "0.1.0"
