"""Job configuration: one JSON document, overridable field by field.

A job names a kind (maxface, cmc1, frontal, genericity), the defining
expressions for that kind, the working rectangle, grid sizes,
tolerances, output paths and a seed.  CLI flags mirror the JSON paths:
--tolerances.eps-zero 1e-9 sets tolerances.eps_zero.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .tracing import Rectangle
from .weierstrass import DEFAULT_TOLERANCES, Tolerances

KINDS = ("maxface", "cmc1", "frontal", "genericity")

DEFAULT_OUTPUT_FILES = {
    "classification_csv": "classification.csv",
    "curve_csv": "curve.csv",
    "mesh_obj": "mesh.obj",
    "summary_json": "summary.json",
    "report_json": "report.json",
}


class ConfigError(Exception):
    """Invalid or inconsistent job configuration."""


@dataclass
class JobConfig:
    kind: str
    expressions: Dict[str, Any] = field(default_factory=dict)
    domain: Tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)
    base_point: complex = 0j
    grid: Tuple[int, int] = (32, 32)
    tolerances: Tolerances = DEFAULT_TOLERANCES
    seed: int = 0
    threads: int = 1
    output_dir: str = "."
    output: Dict[str, str] = field(default_factory=dict)
    probe: Dict[str, Any] = field(default_factory=dict)
    seeds: List[Tuple[float, float]] = field(default_factory=lambda: [(0.0, 0.0)])
    jet: Optional[Dict[str, Any]] = None

    @property
    def rectangle(self) -> Rectangle:
        return Rectangle(*self.domain)

    def path(self, key: str) -> str:
        name = self.output.get(key, DEFAULT_OUTPUT_FILES[key])
        return os.path.join(self.output_dir, name)

    def validate(self) -> "JobConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}, got {self.kind!r}")
        u0, u1, v0, v1 = self.domain
        if not (u0 < u1 and v0 < v1):
            raise ConfigError(f"degenerate domain rectangle {self.domain}")
        if len(self.grid) != 2 or min(self.grid) < 2:
            raise ConfigError(f"grid must be >= 2 per axis, got {self.grid}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

        has_gw = "g" in self.expressions and "omega" in self.expressions
        has_h = "h" in self.expressions
        has_preset = "preset" in self.expressions
        if self.kind in ("maxface", "cmc1"):
            if has_gw == has_h or has_preset:
                raise ConfigError(
                    f"kind {self.kind} needs exactly one of (g, omega) or h")
        elif self.kind == "frontal":
            if not has_preset or has_gw or has_h:
                raise ConfigError("kind frontal needs a preset name")
        elif self.kind == "genericity":
            if not has_h or has_gw or has_preset:
                raise ConfigError("kind genericity needs the expression h")
        return self


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(re, im)
    return complex(value)


def from_dict(doc: Dict[str, Any]) -> JobConfig:
    doc = dict(doc)
    unknown = set(doc) - {
        "kind", "expressions", "domain", "base_point", "grid", "tolerances",
        "seed", "threads", "output_dir", "output", "probe", "seeds", "jet"}
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    if "kind" not in doc:
        raise ConfigError("config is missing the required field 'kind'")
    tol_doc = doc.get("tolerances", {})
    try:
        tolerances = Tolerances(
            eps_zero=float(tol_doc.get("eps_zero", DEFAULT_TOLERANCES.eps_zero)),
            eps_curve=float(tol_doc.get("eps_curve", DEFAULT_TOLERANCES.eps_curve)),
            eps_int=float(tol_doc.get("eps_int", DEFAULT_TOLERANCES.eps_int)),
            eps_ode=float(tol_doc.get("eps_ode", DEFAULT_TOLERANCES.eps_ode)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    threads_default = int(os.environ.get("SINGLAB_THREADS", "1"))
    cfg = JobConfig(
        kind=doc["kind"],
        expressions=dict(doc.get("expressions", {})),
        domain=tuple(float(x) for x in doc.get("domain", (-1, 1, -1, 1))),
        base_point=_as_complex(doc.get("base_point", 0)),
        grid=tuple(int(x) for x in doc.get("grid", (32, 32))),
        tolerances=tolerances,
        seed=int(doc.get("seed", 0)),
        threads=int(doc.get("threads", threads_default)),
        output_dir=str(doc.get("output_dir", ".")),
        output=dict(doc.get("output", {})),
        probe=dict(doc.get("probe", {})),
        seeds=[tuple(float(c) for c in s) for s in doc.get("seeds", [(0, 0)])],
        jet=doc.get("jet"))
    return cfg.validate()


def from_file(path: str) -> Dict[str, Any]:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None


def apply_overrides(doc: Dict[str, Any], overrides: List[str]) -> Dict[str, Any]:
    """Apply --path.to.field=value pairs onto the raw config dict.

    Path segments use dashes in flag spelling and map to underscored
    keys; values parse as JSON with a string fallback.
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, raw = item.split("=", 1)
        segments = [s.replace("-", "_") for s in key.lstrip("-").split(".")]
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        for s in segments[:-1]:
            node = node.setdefault(s, {})
            if not isinstance(node, dict):
                raise ConfigError(f"override {key!r} crosses a non-object field")
        node[segments[-1]] = value
    return doc
