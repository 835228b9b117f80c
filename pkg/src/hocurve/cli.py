"""Command-line surface.

Subcommands: generate, verify, bcr, table, compare, sort, bulkload, query,
render, gen-points.  Flags win over ``HOC_*`` environment variables, which
win over built-in defaults; there is no config file.  Exit codes: 0 ok,
1 check failure, 2 usage, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import analysis, construction, order, spatial
from .construction import (
    CurveSpec,
    FAMILIES,
    HO_FAMILIES,
    build_curve,
    decompose_self_similar,
    read_curve,
    write_curve,
)
from .core import AnchoredCurve, materialize
from .errors import (
    BudgetExceeded,
    CoordinateOutOfRange,
    DimensionTooSmall,
    HocurveError,
    ParseError,
    UnsupportedDimension,
    UnsupportedFamily,
)
from .order import FixedPoint
from .spatial import POINT_PRECISION, PointRecord

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

_USAGE_ERRORS = (
    UnsupportedFamily,
    UnsupportedDimension,
    DimensionTooSmall,
    CoordinateOutOfRange,
    ParseError,
)


def _env(name: str, fallback=None):
    return os.environ.get(f"HOC_{name}", fallback)


def _env_int(name: str, fallback=None):
    raw = _env(name)
    return int(raw) if raw is not None else fallback


def _add_spec_args(p: argparse.ArgumentParser, need_k: bool = True) -> None:
    p.add_argument("--d", type=int, default=_env_int("D"), help="dimension (env HOC_D)")
    if need_k:
        p.add_argument("--k", type=int, default=_env_int("K"), help="refinement level (env HOC_K)")
    p.add_argument("--family", choices=FAMILIES, default=_env("FAMILY"),
                   help="curve family (env HOC_FAMILY)")


def _require(args, *names) -> None:
    for n in names:
        if getattr(args, n, None) is None:
            raise ParseError(f"--{n} is required (or set HOC_{n.upper()})")


def _parse_point(text: str) -> list[Fraction]:
    vals = []
    for tok in text.split(","):
        try:
            v = Fraction(tok.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coordinate {tok!r}") from None
        vals.append(v)
    return vals


def cmd_generate(args) -> int:
    _require(args, "d", "k", "family")
    built = build_curve(CurveSpec(args.d, args.family, args.k))
    verts = built.vertices()
    if args.out:
        with open(args.out, "w") as fh:
            write_curve(fh, built.spec, verts)
    else:
        write_curve(sys.stdout, built.spec, verts)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(checks) - {"ho", "wf", "ss"}
    if unknown:
        raise ParseError(f"unknown checks: {sorted(unknown)} (available: ho, wf, ss)")
    if args.infile:
        with open(args.infile) as fh:
            spec, verts = read_curve(fh)
        curve = None
    else:
        _require(args, "d", "k", "family")
        spec = CurveSpec(args.d, args.family, args.k)
        built = build_curve(spec)
        curve = built.curve
        verts = materialize(curve.body)
    body = AnchoredCurve(verts[0], tuple(_dirs_or_fail(verts)))
    failed = False
    for check in checks:
        if check == "ho":
            target = curve if curve is not None else body
            res = analysis.check_hyperorthogonal(target, spec.d)
            _report_check("ho", res)
            failed |= not res.ok
        elif check == "wf":
            res = analysis.check_wellfolded(body, spec.d)
            _report_check("wf", res)
            failed |= not res.ok
        elif check == "ss":
            if spec.k == 0:
                print("ss: ok (single vertex)")
                continue
            parent = build_curve(CurveSpec(spec.d, spec.family, spec.k - 1))
            try:
                pieces = decompose_self_similar(body, parent.curve.body)
            except HocurveError as exc:
                print(f"ss: FAIL {exc}")
                failed = True
                continue
            print("ss: ok")
            for i, (perm, rev) in enumerate(pieces):
                tag = "reversed" if rev else "forward"
                print(f"  block {i}: {list(perm.image)} {tag}")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _dirs_or_fail(verts):
    dirs = construction._dirs_of(verts)
    if dirs is None:
        raise ParseError("curve file does not describe unit steps")
    return dirs


def _report_check(name: str, res: analysis.CheckResult) -> None:
    if res.ok:
        print(f"{name}: ok")
    else:
        loc = f" at {res.location}" if res.location else ""
        print(f"{name}: FAIL {res.detail}{loc}")


def _series_lines(report: analysis.BcrReport, exact: bool):
    for k, ratio in enumerate(report.series, start=1):
        yield k, analysis.format_ratio(ratio, exact)


def cmd_bcr(args) -> int:
    _require(args, "d", "family")
    report = analysis.bcr_series(
        args.d, args.family, args.kmax,
        allow_big=args.allow_big, threads=args.threads)
    sep = "\t" if args.format == "tsv" else "  "
    print(sep.join(["k", "worst_bcr"]))
    for k, text in _series_lines(report, args.exact):
        print(sep.join([str(k), text]))
    i, j = report.range
    print(f"# worst range at final level: cells {i}..{j}")
    if args.figure:
        _save_series_figure(args.figure, {args.family: report.series}, args.d)
    return EXIT_OK


def cmd_table(args) -> int:
    _require(args, "d")
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    for fam in families:
        if fam not in FAMILIES:
            raise ParseError(f"unknown family {fam!r}")
    levels = {}
    if args.d <= 6 and args.kmax >= 1:
        levels[args.d] = args.kmax
    rows = analysis.table_report(
        [args.d], levels, families,
        allow_big=args.allow_big, threads=args.threads)
    sep = "\t" if args.format == "tsv" else "  "
    width = max(len(r.label) for r in rows)
    print(sep.join(["curve".ljust(0 if args.format == "tsv" else width), f"d={args.d}"]))
    for row in rows:
        label = row.label if args.format == "tsv" else row.label.ljust(width)
        print(sep.join([label, analysis.format_ratio(row.values[args.d], args.exact)]))
    if args.figure and levels:
        series = {}
        for fam in families:
            series[fam] = analysis.bcr_series(
                args.d, fam, args.kmax,
                allow_big=args.allow_big, threads=args.threads).series
        _save_series_figure(args.figure, series, args.d)
    return EXIT_OK


def _save_series_figure(path: str, series: dict[str, tuple], d: int) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for fam, ratios in sorted(series.items()):
        ks = list(range(1, len(ratios) + 1))
        ax.plot(ks, [float(r) for r in ratios], marker="o", label=fam)
    ax.axhline(4.0, color="grey", linestyle=":", linewidth=1)
    ax.set_xlabel("level k")
    ax.set_ylabel("worst cell-aligned BCR")
    ax.set_title(f"worst-case box-to-curve ratio, d={d}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": "hocurve"})
    plt.close(fig)


def cmd_compare(args) -> int:
    _require(args, "family")
    pv = _parse_point(args.p)
    qv = _parse_point(args.q)
    if len(pv) != len(qv):
        raise ParseError("points have different dimensions")
    spec = CurveSpec(len(pv), args.family, 1)
    p = FixedPoint.from_fractions(pv, POINT_PRECISION)
    q = FixedPoint.from_fractions(qv, POINT_PRECISION)
    print(order.compare(p, q, spec))
    return EXIT_OK


def cmd_sort(args) -> int:
    _require(args, "family")
    records = spatial.load_points(args.infile, spatial.CSV_FORMAT)
    if not records:
        ordered = []
    else:
        spec = CurveSpec(records[0].coords.dim, args.family, 1)
        perm = order.sort_points([r.coords for r in records], spec)
        ordered = [records[i] for i in perm]
    out = [PointRecord(i, r.coords) for i, r in enumerate(ordered)]
    if args.out:
        spatial.write_points(out, args.out, spatial.CSV_FORMAT)
    else:
        spatial.write_points(out, sys.stdout, spatial.CSV_FORMAT)
    return EXIT_OK


def cmd_bulkload(args) -> int:
    _require(args, "family")
    records = spatial.load_points(args.infile, args.informat)
    if not records:
        return EXIT_OK
    spec = CurveSpec(records[0].coords.dim, args.family, 1)
    blocks = spatial.bulk_load(records, args.B, spec)
    dest = open(args.out, "w") if args.out else sys.stdout
    try:
        for idx, b in enumerate(blocks):
            lo = "\t".join(str(float(x)) for x in b.lo)
            hi = "\t".join(str(float(x)) for x in b.hi)
            dest.write(f"{idx}\t{b.size}\t{float(b.volume)}\t{lo}\t{hi}\n")
    finally:
        if args.out:
            dest.close()
    stats = spatial.block_stats(blocks)
    print(f"# blocks={stats.count} total_vol={stats.total_volume:.6g} "
          f"mean_vol={stats.mean_volume:.6g} max_vol={stats.max_volume:.6g} "
          f"max_bcr_proxy={stats.max_bcr_proxy:.6g}", file=sys.stderr)
    return EXIT_OK


def _read_blocks_tsv(path: str) -> list[spatial.Block]:
    blocks = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 5 or (len(parts) - 3) % 2 != 0:
                raise ParseError("bad block line", line=lineno)
            d = (len(parts) - 3) // 2
            size = int(parts[1])
            lo = tuple(Fraction(x) for x in parts[3:3 + d])
            hi = tuple(Fraction(x) for x in parts[3 + d:3 + 2 * d])
            blocks.append(spatial.Block(tuple(range(size)), lo, hi))
    return blocks


def cmd_query(args) -> int:
    blocks = _read_blocks_tsv(args.blocks)
    if args.box:
        lo_text, hi_text = _split_colon(args.box)
        hits = spatial.query_box(blocks, _parse_point(lo_text), _parse_point(hi_text))
    else:
        center_text, r_text = _split_colon(args.sphere)
        try:
            radius = Fraction(r_text)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad radius {r_text!r}") from None
        hits = spatial.query_sphere(blocks, _parse_point(center_text), radius)
    for h in hits:
        print(h)
    return EXIT_OK


def _split_colon(text: str) -> tuple[str, str]:
    if ":" not in text:
        raise ParseError("expected 'a,b,..:c,d,..' or 'a,b,..:r'")
    left, right = text.split(":", 1)
    return left, right


def cmd_render(args) -> int:
    _require(args, "d", "k", "family")
    if args.d > 3:
        raise UnsupportedDimension("render supports d = 2 (plan) and d = 3 (wireframe)")
    built = build_curve(CurveSpec(args.d, args.family, args.k))
    verts = built.vertices()
    svg = _render_svg(verts, args.d, args.k)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def _render_svg(verts, d: int, k: int) -> str:
    cell = 24.0
    margin = cell
    n = 2 ** k
    if d == 2:
        pts = [((v[0] + 0.5) * cell, (n - v[1] - 0.5) * cell) for v in verts]
        width = height = n * cell
    else:
        # oblique wireframe: depth shifts right and up
        shear = 0.45
        pts = [((v[0] + 0.5 + shear * v[2]) * cell,
                (n - v[1] - 0.5 + shear * (n - v[2] - 1)) * cell) for v in verts]
        width = (n + shear * n) * cell
        height = (n + shear * n) * cell
    coords = " ".join(f"{x + margin:.2f},{y + margin:.2f}" for x, y in pts)
    w = width + 2 * margin
    h = height + 2 * margin
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2f}" height="{h:.2f}" '
        f'viewBox="0 0 {w:.2f} {h:.2f}">\n'
        f'<rect width="{w:.2f}" height="{h:.2f}" fill="white"/>\n'
        f'<polyline fill="none" stroke="black" stroke-width="1.5" '
        f'stroke-linejoin="round" points="{coords}"/>\n'
        "</svg>\n"
    )


def cmd_gen_points(args) -> int:
    rng = random.Random(args.seed)
    records = []
    for i in range(args.n):
        coords = tuple(rng.getrandbits(POINT_PRECISION) for _ in range(args.d))
        records.append(PointRecord(i, FixedPoint(coords, POINT_PRECISION)))
    if args.out:
        spatial.write_points(records, args.out, args.format)
    else:
        spatial.write_points(records, sys.stdout, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hocurve",
        description="hyperorthogonal well-folded space-filling curves: "
                    "generation, verification, ordering and bounding-box analysis")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a curve's vertex sequence")
    _add_spec_args(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="run structural checks on a curve")
    _add_spec_args(p)
    p.add_argument("--in", dest="infile", help="curve file to verify (instead of --d/--k/--family)")
    p.add_argument("--checks", default="ho,wf,ss", help="comma list from: ho, wf, ss")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bcr", help="worst-case box-to-curve ratio series for one family")
    _add_spec_args(p, need_k=False)
    p.add_argument("--kmax", type=int, default=_env_int("KMAX", 3))
    p.add_argument("--exact", action="store_true", help="print exact rationals num/den")
    p.add_argument("--allow-big", action="store_true", help="lift the 2^16-cell scan budget")
    p.add_argument("--threads", type=int, default=_env_int("THREADS", 1))
    p.add_argument("--format", choices=("table", "tsv"), default="table")
    p.add_argument("--figure", help="also save a PNG of the per-level series")
    p.set_defaults(func=cmd_bcr)

    p = sub.add_parser("table", help="worst-case ratio table: bounds plus measured families")
    p.add_argument("--d", type=int, default=_env_int("D"))
    p.add_argument("--kmax", type=int, default=_env_int("KMAX", 3))
    p.add_argument("--families", default=",".join(FAMILIES))
    p.add_argument("--exact", action="store_true")
    p.add_argument("--allow-big", action="store_true")
    p.add_argument("--threads", type=int, default=_env_int("THREADS", 1))
    p.add_argument("--format", choices=("table", "tsv"), default="table")
    p.add_argument("--figure", help="also save a PNG of the per-level series")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("compare", help="order two points along a curve: prints -1, 0 or 1")
    p.add_argument("--family", choices=HO_FAMILIES, default=_env("FAMILY"))
    p.add_argument("p", help="comma-separated coordinates in [0,1)")
    p.add_argument("q", help="comma-separated coordinates in [0,1)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sort", help="sort a CSV point file into curve order")
    p.add_argument("--family", choices=HO_FAMILIES, default=_env("FAMILY"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("bulkload", help="pack sorted points into blocks; writes a TSV")
    p.add_argument("--family", choices=HO_FAMILIES, default=_env("FAMILY"))
    p.add_argument("--B", type=int, required=True, help="block capacity")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--informat", choices=(spatial.CSV_FORMAT, spatial.BINARY_FORMAT),
                   default=spatial.CSV_FORMAT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bulkload)

    p = sub.add_parser("query", help="report blocks whose boxes intersect a box or sphere")
    p.add_argument("--blocks", required=True, help="block TSV from bulkload")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--box", help="lo1,lo2,..:hi1,hi2,..")
    g.add_argument("--sphere", help="c1,c2,..:radius")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("render", help="draw a curve as an SVG polyline")
    _add_spec_args(p)
    p.add_argument("--out", help="output SVG file (default stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("gen-points", help="write seed-fixed uniform random points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=_env_int("D"), required=False)
    p.add_argument("--seed", type=int, required=True, help="explicit seed (no wall-clock seeding)")
    p.add_argument("--format", choices=(spatial.CSV_FORMAT, spatial.BINARY_FORMAT),
                   default=spatial.CSV_FORMAT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_points)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HocurveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
