"""Command-line surface: classify, mesh, singular-curve, duality-check,
genericity-probe, jet-check, presets.

Every command reads one JSON config (--config), optionally patched by
--path.to.field=value overrides, and writes deterministic artifacts.
Errors come back as structured JSON on stdout; exit status 2 flags
configuration/parse problems, 1 runtime failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .classification import Tag, tag_histogram
from .cmc1 import LiftIntegrationError, TransversalityError, classify_point_cmc1
from .config import (ConfigError, JobConfig, apply_overrides, from_dict,
                     from_file)
from .expr import Call, Const, ExprError, ExprSyntaxError, parse
from .frontal import FrontalError, PRESETS, TangentDevelopable, classify as \
    classify_frontal, preset as frontal_preset
from .genericity import Jet2Point, jacobian_check, membership, \
    perturb_and_classify
from .serialize import (fmt, write_classification_csv, write_csv,
                        write_curve_csv, write_json, write_obj)
from .tracing import ContinuationError, DegenerateSeedError
from .weierstrass import (DataValidityError, PreconditionError,
                          QuadratureError, WeierstrassData, conjugate, mesh,
                          singular_locus, special_points)

_DUALITY_EXPECTED = {
    Tag.SWALLOWTAIL: Tag.CUSPIDAL_CROSS_CAP,
    Tag.CUSPIDAL_CROSS_CAP: Tag.SWALLOWTAIL,
    Tag.CUSPIDAL_EDGE: Tag.CUSPIDAL_EDGE,
}

_CONFIG_ERRORS = (ConfigError, ExprError, ValueError)
_RUNTIME_ERRORS = (ContinuationError, DegenerateSeedError, QuadratureError,
                   LiftIntegrationError, TransversalityError,
                   PreconditionError, DataValidityError, FrontalError,
                   KeyError)


def _build_data(cfg: JobConfig) -> WeierstrassData:
    ex = cfg.expressions
    if "h" in ex:
        g = Call("exp", parse(ex["h"]))
        omega = Const(1.0)
    else:
        g, omega = parse(ex["g"]), parse(ex["omega"])
    return WeierstrassData(g=g, omega_hat=omega,
                           base_point=cfg.base_point, domain=cfg.rectangle)


def _locus_points(cfg: JobConfig, data: WeierstrassData):
    curves = singular_locus(data, cfg.grid, cfg.tolerances)
    points = []
    for curve in curves:
        points.extend(curve.points)
        points.extend(special_points(data, curve, cfg.tolerances))
    return curves, points


def _summary_base(cfg: JobConfig) -> Dict:
    return {"tool": "singlab", "version": __version__,
            "kind": cfg.kind, "seed": cfg.seed}


def _curve_meta(curves) -> List[Dict]:
    meta = []
    for curve in curves:
        zs = [pt.z for pt in curve.points]
        length = float(sum(abs(b - a) for a, b in zip(zs[:-1], zs[1:])))
        if curve.closed and len(zs) > 1:
            length += float(abs(zs[0] - zs[-1]))
        meta.append({"nodes": len(zs), "closed": curve.closed,
                     "length": length})
    return meta


def _cmd_classify(cfg: JobConfig) -> Dict:
    if cfg.kind == "frontal":
        return _classify_frontal(cfg)
    data = _build_data(cfg)
    curves, points = _locus_points(cfg, data)
    extra_cols = ()
    if cfg.kind == "cmc1":
        points = [dataclasses.replace(
            pt, classification=classify_point_cmc1(data, pt.z, cfg.tolerances))
            for pt in points]
        extra_cols = ("det_drift",)
    write_classification_csv(cfg.path("classification_csv"), points, extra_cols)
    write_curve_csv(cfg.path("curve_csv"), curves)
    summary = _summary_base(cfg)
    summary["tags"] = tag_histogram(pt.classification for pt in points)
    summary["points"] = len(points)
    summary["curves"] = _curve_meta(curves)
    write_json(cfg.path("summary_json"), summary)
    summary["written"] = [cfg.path("classification_csv"),
                          cfg.path("curve_csv"), cfg.path("summary_json")]
    return summary


def _frontal_map(cfg: JobConfig):
    ex = cfg.expressions
    name = ex["preset"]
    kwargs = {}
    if name == "tangent-developable":
        if "curve" in ex:
            kwargs["curve"] = tuple(ex["curve"])
        kwargs["domain"] = cfg.rectangle
    obj = frontal_preset(name, **kwargs)
    return obj.frontal if isinstance(obj, TangentDevelopable) else obj


def _classify_frontal(cfg: JobConfig) -> Dict:
    F = _frontal_map(cfg)
    reports = [classify_frontal(F, seed, eps_zero=cfg.tolerances.eps_zero)
               for seed in cfg.seeds]
    nan = float("nan")
    rows = []
    for i, rep in enumerate(reports):
        rows.append([str(i), fmt(rep.location[0]), fmt(rep.location[1]),
                     rep.tag.value, fmt(nan), fmt(nan), fmt(nan),
                     fmt(rep.psi0), fmt(rep.psi1)])
    header = ["index", "re_z", "im_z", "tag", "re_alpha", "im_alpha",
              "second_test", "psi0", "psi1"]
    write_csv(cfg.path("classification_csv"), header, rows)
    summary = _summary_base(cfg)
    summary["tags"] = tag_histogram(rep.tag for rep in reports)
    summary["reports"] = [
        {"location": [rep.location[0], rep.location[1]],
         "tag": rep.tag.value, "psi0": rep.psi0, "psi1": rep.psi1,
         "transversal": rep.transversal}
        for rep in reports]
    write_json(cfg.path("summary_json"), summary)
    summary["written"] = [cfg.path("classification_csv"),
                          cfg.path("summary_json")]
    return summary


def _cmd_mesh(cfg: JobConfig) -> Dict:
    if cfg.kind not in ("maxface", "cmc1"):
        raise ConfigError("mesh export is defined for kinds maxface and cmc1")
    data = _build_data(cfg)
    written = [cfg.path("mesh_obj")]
    if cfg.kind == "maxface":
        m = mesh(data, cfg.grid, cfg.tolerances.eps_int, cfg.threads)
        write_obj(cfg.path("mesh_obj"), m,
                  comment=f"singlab {__version__} maxface mesh")
    else:
        m, x0_rows = _cmc1_mesh(cfg, data)
        write_obj(cfg.path("mesh_obj"), m,
                  comment=f"singlab {__version__} cmc1 mesh (x1,x2,x3); "
                          f"x0 in sidecar CSV")
        sidecar = cfg.path("mesh_obj") + ".x0.csv"
        write_csv(sidecar, ["vertex", "x0"], x0_rows)
        written.append(sidecar)
    summary = _summary_base(cfg)
    summary.update({"vertices": int(len(m.vertices)),
                    "faces": int(len(m.faces)),
                    "written": written})
    return summary


def _cmc1_mesh(cfg: JobConfig, data: WeierstrassData):
    """Project the CMC-1 face on the domain grid; spatial part + x0 rows."""
    from .cmc1 import integrate_lift, project
    from .weierstrass import TriangleMesh
    nu, nv = cfg.grid
    rect = cfg.rectangle
    us = np.linspace(rect.u_min, rect.u_max, nu + 1)
    vs = np.linspace(rect.v_min, rect.v_max, nv + 1)
    nodes = [complex(u, v) for v in vs for u in us]
    vecs = [project(integrate_lift(data, z, cfg.tolerances.eps_ode)).vec
            for z in nodes]
    faces = []
    for j in range(nv):
        for i in range(nu):
            a = j * (nu + 1) + i
            faces.append((a, a + 1, a + nu + 2))
            faces.append((a, a + nu + 2, a + nu + 1))
    m = TriangleMesh(vertices=np.array([v[1:] for v in vecs]),
                     faces=np.array(faces, dtype=int), grid_points=nodes)
    rows = [[str(i), fmt(v[0])] for i, v in enumerate(vecs)]
    return m, rows


def _cmd_singular_curve(cfg: JobConfig) -> Dict:
    data = _build_data(cfg)
    curves = singular_locus(data, cfg.grid, cfg.tolerances, classify=False)
    write_curve_csv(cfg.path("curve_csv"), curves)
    summary = _summary_base(cfg)
    summary["curves"] = _curve_meta(curves)
    summary["written"] = [cfg.path("curve_csv")]
    return summary


def _cmd_duality_check(cfg: JobConfig) -> Dict:
    if cfg.kind not in ("maxface", "cmc1"):
        raise ConfigError("duality-check needs kind maxface or cmc1")
    data = _build_data(cfg)
    dual = conjugate(data)

    def tag_at(d: WeierstrassData, z: complex) -> Tag:
        if cfg.kind == "cmc1":
            return classify_point_cmc1(d, z, cfg.tolerances).tag
        from .weierstrass import classify_point
        return classify_point(d, z, cfg.tolerances).tag

    _, points = _locus_points(cfg, data)
    pairs, violations = [], 0
    for pt in points:
        t1 = tag_at(data, pt.z) if cfg.kind == "cmc1" \
            else pt.classification.tag
        t2 = tag_at(dual, pt.z)
        expected = _DUALITY_EXPECTED.get(t1)
        ok = expected is None or t2 == expected
        if not ok:
            violations += 1
        pairs.append({"re_z": pt.z.real, "im_z": pt.z.imag,
                      "tag": t1.value, "conjugate_tag": t2.value, "ok": ok})
    summary = _summary_base(cfg)
    summary.update({"pairs": pairs, "violations": violations,
                    "points": len(pairs)})
    write_json(cfg.path("report_json"), summary)
    summary["written"] = [cfg.path("report_json")]
    summary["exit_status"] = 0 if violations == 0 else 1
    return summary


def _cmd_genericity_probe(cfg: JobConfig) -> Dict:
    if cfg.kind != "genericity":
        raise ConfigError("genericity-probe needs kind genericity")
    magnitude = float(cfg.probe.get("magnitude", 1e-3))
    trials = int(cfg.probe.get("trials", 100))
    report = perturb_and_classify(cfg.expressions["h"], magnitude, trials,
                                  cfg.seed, cfg.rectangle, cfg.tolerances)
    with open(cfg.path("report_json"), "w", newline="\n") as fh:
        fh.write(report.to_json())
        fh.write("\n")
    summary = _summary_base(cfg)
    summary.update({"generic_fraction": report.generic_fraction,
                    "failures": report.failures, "trials": trials,
                    "magnitude": magnitude,
                    "written": [cfg.path("report_json")]})
    return summary


def _cmd_jet_check(cfg: JobConfig) -> Dict:
    summary = _summary_base(cfg)
    doc = cfg.jet or {}

    def cx(key, default=0.0):
        v = doc.get(key, default)
        return complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)

    if doc:
        P = Jet2Point(cx("p"), cx("h"), cx("h1"), cx("h2"))
        flags = membership(P, cfg.tolerances.eps_zero)
        jac = jacobian_check(P)
        from .genericity import classify_jet
        summary["jet"] = {
            "membership": {"in_A": flags.in_A, "in_B": flags.in_B,
                           "in_C": flags.in_C},
            "tag": classify_jet(P, cfg.tolerances).tag.value,
            "jacobians": jac,
        }
    count = int(cfg.probe.get("random_jets", 0))
    if count:
        rng = np.random.default_rng(cfg.seed)
        worst = 0.0
        for _ in range(count):
            c = rng.normal(size=6)
            if abs(complex(c[2], c[3])) <= 0.1:
                c[2] += 0.5
            P = Jet2Point(0j, complex(c[0], c[1]), complex(c[2], c[3]),
                          complex(c[4], c[5]))
            jac = jacobian_check(P)
            for s in ("B", "C"):
                cf, nm = jac[f"closed_form_{s}"], jac[f"numeric_{s}"]
                worst = max(worst, abs(cf - nm) / max(1.0, abs(cf)))
        summary["random_jets"] = {"count": count, "max_rel_error": worst}
    write_json(cfg.path("report_json"), summary)
    summary["written"] = [cfg.path("report_json")]
    return summary


_COMMANDS = {
    "classify": _cmd_classify,
    "mesh": _cmd_mesh,
    "singular-curve": _cmd_singular_curve,
    "duality-check": _cmd_duality_check,
    "genericity-probe": _cmd_genericity_probe,
    "jet-check": _cmd_jet_check,
}


def _error_json(exc: Exception) -> str:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    offset = getattr(exc, "offset", None)
    if offset is not None:
        payload["offset"] = offset
    return json.dumps({"error": payload}, sort_keys=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singlab",
        description="Maximal-surface and frontal singularity toolkit")
    parser.add_argument("--version", action="version",
                        version=f"singlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in list(_COMMANDS) + ["presets"]:
        p = sub.add_parser(name)
        if name != "presets":
            p.add_argument("--config", required=True,
                           help="path to the JSON job config")
            p.add_argument("--threads", type=int, default=None,
                           help="worker threads (default: SINGLAB_THREADS or 1)")
            p.add_argument("--output-dir", default=None)
            p.add_argument("overrides", nargs="*",
                           help="field overrides, e.g. tolerances.eps-zero=1e-9")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        print(json.dumps({"presets": sorted(PRESETS)}, sort_keys=True))
        return 0
    try:
        doc = from_file(args.config)
        doc = apply_overrides(doc, args.overrides)
        if args.threads is not None:
            doc["threads"] = args.threads
        if args.output_dir is not None:
            doc["output_dir"] = args.output_dir
        cfg = from_dict(doc)
        os.makedirs(cfg.output_dir, exist_ok=True)
        summary = _COMMANDS[args.command](cfg)
    except ExprSyntaxError as exc:
        print(_error_json(exc))
        return 2
    except _CONFIG_ERRORS as exc:
        print(_error_json(exc))
        return 2
    except _RUNTIME_ERRORS as exc:
        print(_error_json(exc))
        return 1
    status = summary.pop("exit_status", 0)
    print(json.dumps(summary, sort_keys=True, default=float))
    return status


if __name__ == "__main__":
    sys.exit(main())
