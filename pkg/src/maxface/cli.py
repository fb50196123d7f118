"""Command line driver: validate / classify / sequence / mesh over YAML jobs.

A job file names a data set, a domain, and optionally a scaling family:

    name: catenoid-family
    data:
      kind: catenoid            # catenoid | circle_graph | shrinking_segment
                                # | swallowtail_ring (n: ...)
    domain:
      kind: annulus             # annulus (r_in, r_out) | rectangle (u/v bounds)
      r_in: 0.5
      r_out: 2.0
    t0: 0.0
    family:                     # only needed by `sequence` and deformed meshes
      kind: circle              # circle | segment (a, b)
    n_range: {min: 2, max: 6}   # or n_list: [2, 3, 5]
    tolerances: {root: 1.0e-12, nonzero: 1.0e-8}
    mesh: {n_u: 16, n_v: 16}

Every command emits one deterministic JSON document (sorted keys) carrying the
resolved tolerances and a sha256 of the parsed config, to stdout or --out.
Exit codes: 0 success, 1 mathematical failure, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml

from . import export as export_mod
from .bjorling import (
    BjorlingData,
    InvalidDataError,
    MaxfaceError,
    PeriodError,
    build_phi,
    check_periods,
    singular_set_on_curve,
    solve,
    validate,
    weierstrass_from_phi,
)
from .fixtures import (
    catenoid_data,
    circle_graph_data,
    shrinking_segment_data,
    swallowtail_ring_data,
)
from .laurent import Annulus, LaurentPoly, Rectangle
from .sequences import (
    circle_family,
    convergence_report,
    deform,
    segment_family,
    swallowtail_census,
    verify_scaling_axioms,
)
from .singularities import (
    Tolerances,
    check_generalized_conelike,
    check_shrinking,
    find_swallowtails,
)


class ConfigError(ValueError):
    """The job file is missing, unparseable, or inconsistent."""


@dataclasses.dataclass
class JobConfig:
    name: str
    data: BjorlingData
    data_kind: str
    domain: object
    t0: float
    family: object | None
    family_kind: str | None
    n_list: list[int]
    tolerances: Tolerances
    mesh_nu: int
    mesh_nv: int
    sha256: str


def _data_from_config(cfg: dict) -> tuple[str, BjorlingData]:
    kind = cfg.get("kind")
    if kind == "catenoid":
        return kind, catenoid_data()
    if kind == "circle_graph":
        return kind, circle_graph_data()
    if kind == "shrinking_segment":
        return kind, shrinking_segment_data(float(cfg.get("a", -1.0)),
                                            float(cfg.get("b", 1.0)))
    if kind == "swallowtail_ring":
        if "n" not in cfg:
            raise ConfigError("swallowtail_ring data needs n")
        return kind, swallowtail_ring_data(int(cfg["n"]))
    raise ConfigError(f"unknown data kind {kind!r}")


def _domain_from_config(cfg: dict):
    kind = cfg.get("kind")
    try:
        if kind == "annulus":
            return Annulus(float(cfg["r_in"]), float(cfg["r_out"]))
        if kind == "rectangle":
            return Rectangle(float(cfg["u_min"]), float(cfg["u_max"]),
                             float(cfg["v_min"]), float(cfg["v_max"]))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad domain parameters: {exc}") from exc
    raise ConfigError(f"unknown domain kind {kind!r}")


def _family_from_config(cfg: dict | None):
    if not cfg:
        return None, None
    kind = cfg.get("kind")
    if kind == "circle":
        return kind, circle_family()
    if kind == "segment":
        return kind, segment_family(float(cfg.get("a", 0.0)), float(cfg.get("b", 1.0)))
    raise ConfigError(f"unknown family kind {kind!r}")


def _tolerances_from_config(cfg: dict | None) -> Tolerances:
    cfg = cfg or {}
    defaults = Tolerances()
    known = {f.name for f in dataclasses.fields(Tolerances)}
    bad = set(cfg) - known
    if bad:
        raise ConfigError(f"unknown tolerance names: {sorted(bad)}")
    values = {k: float(cfg.get(k, getattr(defaults, k))) for k in known}
    return Tolerances(**values)


def load_config(path: str | Path) -> JobConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, default=str).encode()).hexdigest()

    if "data" not in raw or "domain" not in raw:
        raise ConfigError("config needs `data` and `domain` sections")
    data_kind, data = _data_from_config(raw["data"])
    domain = _domain_from_config(raw["domain"])
    family_kind, family = _family_from_config(raw.get("family"))

    n_list: list[int] = []
    if "n_list" in raw:
        n_list = [int(n) for n in raw["n_list"]]
    elif "n_range" in raw:
        r = raw["n_range"]
        try:
            n_list = list(range(int(r["min"]), int(r["max"]) + 1))
        except (KeyError, TypeError) as exc:
            raise ConfigError("n_range needs integer min and max") from exc
    mesh = raw.get("mesh") or {}
    return JobConfig(
        name=str(raw.get("name", path.stem)),
        data=data, data_kind=data_kind, domain=domain,
        t0=float(raw.get("t0", 0.0)),
        family=family, family_kind=family_kind, n_list=n_list,
        tolerances=_tolerances_from_config(raw.get("tolerances")),
        mesh_nu=int(mesh.get("n_u", 16)), mesh_nv=int(mesh.get("n_v", 16)),
        sha256=digest)


# ---------------------------------------------------------------------------
# JSON plumbing


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return {"re": _jsonable(x.real), "im": _jsonable(x.imag)}
    if isinstance(x, float):
        return None if math.isnan(x) else x
    if hasattr(x, "item") and not hasattr(x, "__len__"):  # numpy scalar
        return _jsonable(x.item())
    return x


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_jsonable(doc), sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _header(job: JobConfig, command: str) -> dict:
    return {
        "command": command,
        "name": job.name,
        "config_sha256": job.sha256,
        "data_kind": job.data_kind,
        "tolerances": dataclasses.asdict(job.tolerances),
    }


def _domain_doc(domain) -> dict:
    if isinstance(domain, Annulus):
        return {"kind": "annulus", "r_in": domain.r_in, "r_out": domain.r_out}
    return {"kind": "rectangle", "u_min": domain.u_min, "u_max": domain.u_max,
            "v_min": domain.v_min, "v_max": domain.v_max}


# ---------------------------------------------------------------------------
# commands


def cmd_validate(job: JobConfig, out: str | None) -> int:
    rep = validate(job.data)
    doc = _header(job, "validate")
    doc["validation"] = dataclasses.asdict(rep)
    doc["validation"]["ok"] = rep.ok
    doc["validation"]["failures"] = rep.failures()
    if rep.ok:
        phi = build_phi(job.data)
        periods = check_periods(phi, job.domain)
        w = weierstrass_from_phi(phi)
        doc["periods"] = {
            "ok": periods.ok,
            "reason": periods.reason,
            "log_coeffs": list(periods.log_coeffs),
            "re_loop_periods": list(periods.loop_re_periods()),
        }
        doc["weierstrass"] = {
            "g_is_polynomial": isinstance(w.g, LaurentPoly),
            "singular_set_deviation": singular_set_on_curve(w, job.data.curve),
        }
    _emit(doc, out)
    return 0 if rep.ok else 1


def cmd_classify(job: JobConfig, out: str | None, resolution: int) -> int:
    tol = job.tolerances
    try:
        report = find_swallowtails(job.data, tol=tol, resolution=resolution)
    except InvalidDataError as exc:
        _emit({**_header(job, "classify"), "error": str(exc)}, out)
        return 1
    shrink = check_shrinking(job.data, tol)
    doc = _header(job, "classify")
    doc["identically_degenerate"] = report.identically_degenerate
    doc["swallowtail_count"] = report.swallowtail_count
    doc["swallowtail_parameters"] = list(report.swallowtail_parameters)
    doc["touch_parameters"] = list(report.touch_parameters)
    doc["min_image_separation"] = report.min_image_separation
    doc["points"] = [{
        "t": p.t, "kind": p.kind.value, "h": p.h, "h_prime": p.h_prime,
        "d_alpha": p.d_alpha, "d_beta": p.d_beta, "branch": p.branch,
        "a_direct": p.a_direct, "a_fields": p.a_fields,
    } for p in report.points]
    doc["shrinking"] = dataclasses.asdict(shrink)

    w = weierstrass_from_phi(build_phi(job.data))
    doc["singular_set_deviation"] = singular_set_on_curve(w, job.data.curve)
    try:
        sol = solve(job.data, job.domain, t0=job.t0)
        cone = check_generalized_conelike(job.data, sol, tol)
        doc["generalized_conelike"] = {
            "is_conelike": cone.is_conelike,
            "max_excursion": cone.max_excursion,
            "cone_point": cone.cone_point,
        }
    except PeriodError as exc:
        doc["generalized_conelike"] = None
        doc["period_failure"] = str(exc)
    _emit(doc, out)
    return 0


def cmd_sequence(job: JobConfig, out: str | None, resolution: int) -> int:
    if job.family is None:
        raise ConfigError("sequence command needs a `family` section")
    if not job.n_list:
        raise ConfigError("sequence command needs n_range or n_list")
    axioms = verify_scaling_axioms(job.family, job.data, job.domain,
                                   job.n_list, job.tolerances)
    conv = convergence_report(job.data, job.family, job.domain, job.n_list,
                              t0=job.t0, tol=job.tolerances,
                              count_swallowtails=False)

    threads = max(1, int(os.environ.get("MAXFACE_THREADS", "1")))
    deformations = {n: deform(job.data, job.family, n) for n in job.n_list}

    def census(n: int) -> int:
        return swallowtail_census(deformations[n], tol=job.tolerances,
                                  resolution=resolution)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = dict(zip(job.n_list, pool.map(census, job.n_list)))
    else:
        counts = {n: census(n) for n in job.n_list}

    doc = _header(job, "sequence")
    doc["domain"] = _domain_doc(job.domain)
    doc["family_kind"] = job.family_kind
    doc["axioms"] = {
        "ok": axioms.ok,
        "norms_decreasing": axioms.norms_decreasing,
        "rows": [dataclasses.asdict(r) for r in axioms.rows],
    }
    doc["convergence"] = {
        "z0": complex(conv.z0),
        "all_certified": conv.all_certified,
        "certified_decreasing": conv.certified_decreasing,
        "rows": [{
            "n": r.n,
            "swallowtail_count": counts[r.n],
            "gamma_norm_bound": r.gamma_norm_bound,
            "path_bound": r.path_bound,
            "certified": r.certified,
            "measured": r.measured,
            "certificate_holds": r.certificate_holds,
        } for r in conv.rows],
    }
    deformed_periods = {}
    for n in job.n_list:
        rep = check_periods(deformations[n].psi, job.domain)
        deformed_periods[str(n)] = rep.ok
    doc["deformed_periods_ok"] = deformed_periods
    _emit(doc, out)
    return 0 if (axioms.ok and conv.all_certified) else 1


def cmd_mesh(job: JobConfig, out_dir: str, n_u: int, n_v: int) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = _header(job, "mesh")
    doc["grid"] = {"n_u": n_u, "n_v": n_v}
    written: list[str] = []
    skipped: dict[str, str] = {}

    sol = solve(job.data, job.domain, t0=job.t0)
    mesh = export_mod.sample_surface(sol, n_u, n_v)
    obj = export_mod.write_obj(mesh, out / f"{job.name}.obj")
    written.append(obj.name)

    report = find_swallowtails(job.data, tol=job.tolerances)
    img = export_mod.singular_image_curve(
        sol, samples=max(256, n_v), marked=report.swallowtail_parameters)
    csv = export_mod.write_polyline_csv(
        img.ts, img.points, out / f"{job.name}_curve.csv", collapse=img.collapsed)
    written.append(csv.name)
    if img.marked_points is not None:
        marks = export_mod.write_polyline_csv(
            list(img.marked_ts), img.marked_points,
            out / f"{job.name}_swallowtails.csv")
        written.append(marks.name)

    if job.family is not None:
        for n in job.n_list:
            dd = deform(job.data, job.family, n)
            try:
                sol_n = solve(dd.data, job.domain, t0=job.t0)
            except PeriodError as exc:
                skipped[str(n)] = str(exc)
                continue
            mesh_n = export_mod.sample_surface(sol_n, n_u, n_v)
            obj_n = export_mod.write_obj(mesh_n, out / f"{job.name}_n{n}.obj")
            written.append(obj_n.name)

    doc["written"] = sorted(written)
    doc["skipped"] = skipped
    doc["out_dir"] = str(out)
    _emit(doc, None)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="maxface",
        description="maximal-surface singular data: validate, classify, deform, export")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", required=True, help="YAML job file")
        sp.add_argument("--out", default=None, help="write the JSON report here")
        sp.add_argument("--tol-root", type=float, default=None,
                        help="override the root-detection tolerance")
        sp.add_argument("--tol-nonzero", type=float, default=None,
                        help="override the nonvanishing tolerance")

    sp = sub.add_parser("validate", help="check data admissibility and periods")
    common(sp)

    sp = sub.add_parser("classify", help="find and classify singular points")
    common(sp)
    sp.add_argument("--resolution", type=int, default=2048,
                    help="grid resolution for root hunting")

    sp = sub.add_parser("sequence", help="verify a scaling family and certify convergence")
    common(sp)
    sp.add_argument("--resolution", type=int, default=2048)
    sp.add_argument("--n-min", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)

    sp = sub.add_parser("mesh", help="export OBJ meshes and curve CSVs")
    common(sp)
    sp.add_argument("--out-dir", default="meshes", help="directory for the files")
    sp.add_argument("--grid", default=None, metavar="UxV",
                    help="mesh resolution, e.g. 32x48")
    sp.add_argument("--n-min", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    return p


def _apply_overrides(job: JobConfig, args: argparse.Namespace) -> JobConfig:
    tol = job.tolerances
    updates = {}
    if getattr(args, "tol_root", None) is not None:
        updates["root"] = args.tol_root
    if getattr(args, "tol_nonzero", None) is not None:
        updates["nonzero"] = args.tol_nonzero
    if updates:
        job.tolerances = dataclasses.replace(tol, **updates)
    n_min, n_max = getattr(args, "n_min", None), getattr(args, "n_max", None)
    if n_min is not None or n_max is not None:
        if n_min is None or n_max is None or n_min > n_max:
            raise ConfigError("--n-min and --n-max must be given together, min <= max")
        job.n_list = list(range(n_min, n_max + 1))
    return job


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = _apply_overrides(load_config(args.config), args)
        if args.command == "validate":
            return cmd_validate(job, args.out)
        if args.command == "classify":
            return cmd_classify(job, args.out, args.resolution)
        if args.command == "sequence":
            return cmd_sequence(job, args.out, args.resolution)
        if args.command == "mesh":
            if args.grid:
                try:
                    n_u, n_v = (int(c) for c in args.grid.lower().split("x"))
                except ValueError as exc:
                    raise ConfigError("--grid expects UxV, e.g. 32x48") from exc
            else:
                n_u, n_v = job.mesh_nu, job.mesh_nv
            return cmd_mesh(job, args.out_dir, n_u, n_v)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except MaxfaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())
