"""Command-line frontend.

Commands: validate, noneck, profile, cheeger, minimizer, reference,
compare. Exit codes: 0 ok, 2 invalid input, 3 the eroded core disconnects
in the requested range, 4 grid budget exceeded. Errors print one
machine-parsable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import shapes
from .domain import load_domain, polygon_area, polygon_perimeter
from .errors import BudgetError, EmptyRegionError, InvalidDomainError, NeckViolationError
from .field import (
    DEFAULT_CELL_BUDGET,
    auto_spacing,
    build_distance_field,
    inner_parallel_mask,
    connected_components,
    inradius,
    write_isof,
)
from .profile import (
    build_cheeger_report,
    compute_sweep,
    profile_csv_text,
    profile_from_legendre,
    resolve_minimizer,
)
from .svg import contours_svg, profile_svg, write_svg

EXIT_INVALID = 2
EXIT_NECK = 3
EXIT_BUDGET = 4


@dataclass
class RunConfig:
    command: str
    grid_h: str = "auto"
    n_kappa_samples: int = 128
    n_v_samples: int = 512
    cell_budget: int = DEFAULT_CELL_BUDGET
    output_paths: dict = field(default_factory=dict)
    volume: float | None = None
    kappa: float | None = None


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _spacing(cfg: RunConfig, dom) -> float:
    if cfg.grid_h == "auto":
        return auto_spacing(dom)
    h = float(cfg.grid_h)
    if h <= 0:
        raise ValueError("grid spacing must be positive")
    return h


def _field(cfg: RunConfig, domain_path):
    dom = load_domain(domain_path)
    h = _spacing(cfg, dom)
    return build_distance_field(dom, h, cell_budget=cfg.cell_budget)


def _cmd_validate(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    if args.dump_field:
        write_isof(args.dump_field, f)
    _emit(
        {
            "name": f.domain.name,
            "n_vertices": int(len(f.domain.vertices)),
            "area": polygon_area(f.domain),
            "perimeter": polygon_perimeter(f.domain),
            "inradius": inradius(f),
            "grid_h": f.grid.h,
            "cells": f.grid.cells,
        },
        args.out,
    )
    return 0


def _cmd_noneck(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    rhat = inradius(f)
    n = cfg.n_kappa_samples
    r_hi = rhat * (1.0 - 1.0 / n)
    r_lo = max(4.0 * f.grid.h, rhat / 64.0)
    ratio = (r_lo / r_hi) ** (1.0 / (n - 1))
    rows = []
    any_disconnected = False
    for i in range(n):
        r = r_hi * ratio**i
        count, _ = connected_components(inner_parallel_mask(f, r))
        rows.append({"r": r, "components": int(count)})
        if count > 1:
            any_disconnected = True
    _emit(
        {"inradius": rhat, "samples": rows, "any_disconnected": any_disconnected},
        args.out,
    )
    return 0


def _cmd_profile(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sweep = compute_sweep(f, cfg.n_kappa_samples)
    prof = profile_from_legendre(sweep, f, cfg.n_v_samples)
    text = profile_csv_text(prof)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        write_svg(args.svg, profile_svg(prof))
    return 0


def _cmd_cheeger(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sweep = compute_sweep(f, cfg.n_kappa_samples)
        prof = profile_from_legendre(sweep, f, cfg.n_v_samples)
        rep = build_cheeger_report(f, prof)
    _emit(rep.to_json_dict(), args.out)
    if args.svg:
        write_svg(args.svg, contours_svg(f.domain, [(rep.contours, "#9c1f1f")]))
    return 0


def _cmd_minimizer(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sweep = compute_sweep(f, cfg.n_kappa_samples)
        prof = profile_from_legendre(sweep, f, cfg.n_v_samples)
        rep = resolve_minimizer(f, prof, volume=cfg.volume, kappa=cfg.kappa)
    _emit(rep.to_json_dict(), args.out)
    if args.svg:
        write_svg(args.svg, contours_svg(f.domain, [(rep.contours, "#1f4e9c")]))
    return 0


def _cmd_reference(cfg: RunConfig, args) -> int:
    shape, L = args.shape, args.L
    total = shapes.oracle_total_volume(shape, L)
    vgrid = np.linspace(0.0, total, cfg.n_v_samples)
    lines = ["V,J,kappa,segment_kind"]
    for v in vgrid:
        j = shapes.oracle_profile(shape, L, float(v))
        k = shapes.oracle_kappa(shape, L, float(v)) if v > 0 else math.inf
        kind = shapes.oracle_segment_kind(shape, L, float(v))
        lines.append(f"{v:.17g},{j:.17g},{k:.17g},{kind}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_compare(cfg: RunConfig, args) -> int:
    f = _field(cfg, args.domain)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        sweep = compute_sweep(f, cfg.n_kappa_samples)
    prof = profile_from_legendre(sweep, f, cfg.n_v_samples)
    total = shapes.oracle_total_volume(args.oracle, args.L)
    errs = []
    for v, j in zip(prof.volumes, prof.perimeters):
        if v <= 0 or v > total:
            continue
        ref = shapes.oracle_profile(args.oracle, args.L, float(v))
        if ref > 0:
            errs.append(abs(j - ref) / ref)
    if not errs:
        raise ValueError("no overlapping volumes between profile and oracle")
    _emit(
        {
            "oracle": args.oracle,
            "L": args.L,
            "n_points": len(errs),
            "max_rel_err": float(np.max(errs)),
            "mean_rel_err": float(np.mean(errs)),
        },
        args.out,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="isoperim",
        description="Isoperimetric profiles, constant-curvature minimizers "
        "and Cheeger sets of planar polygonal domains.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, domain=True):
        if domain:
            p.add_argument("domain", help="domain JSON file")
        p.add_argument("--h", default="auto", help='grid spacing (number or "auto")')
        p.add_argument("--kappa-samples", type=int, default=128)
        p.add_argument("--v-samples", type=int, default=512)
        p.add_argument("--cell-budget", type=int, default=DEFAULT_CELL_BUDGET)
        p.add_argument("--out", default=None, help="write output here instead of stdout")

    p = sub.add_parser("validate", help="area, perimeter and inradius of a domain")
    common(p)
    p.add_argument("--dump-field", default=None, help="write the field as ISOF1 binary")

    p = sub.add_parser("noneck", help="component count of the eroded core per radius")
    common(p)

    p = sub.add_parser("profile", help="isoperimetric profile CSV")
    common(p)
    p.add_argument("--svg", default=None, help="also plot J and J^2 to this SVG")

    p = sub.add_parser("cheeger", help="Cheeger constant and set")
    common(p)
    p.add_argument("--svg", default=None, help="draw the Cheeger set to this SVG")

    p = sub.add_parser("minimizer", help="minimizer at a given area or curvature")
    common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--volume", type=float, default=None)
    g.add_argument("--kappa", type=float, default=None)
    p.add_argument("--svg", default=None, help="draw the minimizer contour to this SVG")

    p = sub.add_parser("reference", help="closed-form oracle profile CSV")
    p.add_argument("--shape", choices=shapes.ORACLES, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--v-samples", type=int, default=512)
    p.add_argument("--out", default=None)

    p = sub.add_parser("compare", help="raster profile vs closed-form oracle")
    common(p)
    p.add_argument("--oracle", choices=shapes.ORACLES, required=True)
    p.add_argument("--L", type=float, required=True)
    return ap


_HANDLERS = {
    "validate": _cmd_validate,
    "noneck": _cmd_noneck,
    "profile": _cmd_profile,
    "cheeger": _cmd_cheeger,
    "minimizer": _cmd_minimizer,
    "reference": _cmd_reference,
    "compare": _cmd_compare,
}


def _fail(code: int, kind: str, msg: str) -> int:
    one_line = " ".join(str(msg).split())
    print(f"isoperim-error code={code} kind={kind} msg={one_line!r}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        grid_h=getattr(args, "h", "auto"),
        n_kappa_samples=getattr(args, "kappa_samples", 128),
        n_v_samples=getattr(args, "v_samples", 512),
        cell_budget=getattr(args, "cell_budget", DEFAULT_CELL_BUDGET),
        volume=getattr(args, "volume", None),
        kappa=getattr(args, "kappa", None),
    )
    try:
        return _HANDLERS[args.command](cfg, args)
    except BudgetError as exc:
        return _fail(EXIT_BUDGET, "budget-exceeded", str(exc))
    except NeckViolationError as exc:
        return _fail(EXIT_NECK, "neck-violation", str(exc))
    except (InvalidDomainError, EmptyRegionError, ValueError, OSError) as exc:
        return _fail(EXIT_INVALID, "invalid-input", str(exc))


if __name__ == "__main__":
    sys.exit(main())
