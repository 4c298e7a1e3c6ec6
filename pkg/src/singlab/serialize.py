"""Deterministic writers: classification/curve CSV, Wavefront OBJ, JSON.

Every float is rendered with 17 significant digits in scientific
notation so that repeated runs with identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
from typing import Iterable, List, Optional, Sequence

from .weierstrass import SingularCurve, TriangleMesh


def fmt(x: float) -> str:
    """Fixed 17-significant-digit scientific notation."""
    return f"{float(x):.16e}"


CLASSIFICATION_COLUMNS = ["index", "re_z", "im_z", "tag",
                          "re_alpha", "im_alpha", "second_test"]


def classification_rows(points, extra_columns: Sequence[str] = ()) -> List[List[str]]:
    """CSV rows from SingularPoint-like objects with a .classification."""
    rows = []
    for i, pt in enumerate(points):
        c = pt.classification
        row = [str(i), fmt(pt.z.real), fmt(pt.z.imag), c.tag.value,
               fmt(c.alpha.real), fmt(c.alpha.imag), fmt(c.second_test)]
        for col in extra_columns:
            row.append(fmt(c.extra.get(col, float("nan"))))
        rows.append(row)
    return rows


def write_csv(path: str, header: Sequence[str],
              rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def write_classification_csv(path: str, points,
                             extra_columns: Sequence[str] = ()) -> None:
    header = CLASSIFICATION_COLUMNS + list(extra_columns)
    write_csv(path, header, classification_rows(points, extra_columns))


CURVE_COLUMNS = ["curve", "node", "re_z", "im_z",
                 "re_xi", "im_xi", "re_eta", "im_eta", "closed"]


def write_curve_csv(path: str, curves: Sequence[SingularCurve]) -> None:
    rows = []
    for ci, curve in enumerate(curves):
        for ni, pt in enumerate(curve.points):
            rows.append([str(ci), str(ni), fmt(pt.z.real), fmt(pt.z.imag),
                         fmt(pt.xi.real), fmt(pt.xi.imag),
                         fmt(pt.eta.real), fmt(pt.eta.imag),
                         "1" if curve.closed else "0"])
    write_csv(path, CURVE_COLUMNS, rows)


def write_obj(path: str, mesh: TriangleMesh,
              comment: Optional[str] = None) -> None:
    """Wavefront OBJ with 1-based face indices."""
    with open(path, "w", newline="\n") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        for v in mesh.vertices:
            fh.write(f"v {fmt(v[0])} {fmt(v[1])} {fmt(v[2])}\n")
        for f in mesh.faces:
            fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")


def write_json(path: str, doc: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True))
        fh.write("\n")
