"""ASCII rendering, relation codecs and JSON scenario files."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

from .calculus import Granularity, Point, classify
from .errors import ScenarioError
from .relation import FLAG_NAMES, FsppRelation

ROW_LETTERS = {1: "R", 2: "O", 3: "T"}


def _header(n: int) -> list[str]:
    width = n + 2
    labels = [" "] * width
    for k in range(0, n + 1, 10):
        labels[k:k + 2] = f"{k:02d}"
    ruler = "".join("|" if k % 10 == 0 else "." if k % 5 == 0 else " " for k in range(n + 1))
    return [" " * 10 + "TRANS", " " * 9 + "".join(labels).rstrip(), " " * 9 + ruler]


def render_ascii(r: FsppRelation, title: str) -> str:
    """Grid picture: one row per orientation, one column per distance."""
    header = _header(r.granularity.n_dist)
    lines = [" " + title] + header
    for o, row in enumerate(_rows(r)):
        if o and o % 10 == 0:
            lines.append(header[2])
        lines.append(f" {ROW_LETTERS.get(o, ' ')} {o:03d} : {row}")
    return "\n".join(lines) + "\n"


def _rows(r: FsppRelation) -> list[str]:
    g = r.granularity
    grid = [["0"] * g.n_dist for _ in range(g.m_orient)]
    for c in r.cells():
        grid[c.orient][c.dist] = "1"
    return ["".join(row) for row in grid]


# -- relation codec ------------------------------------------------------------


def serialize_relation(r: FsppRelation, use_hex: bool = False) -> dict:
    if use_hex:
        return {"hex": r.to_hex(), "flags": list(r.flags)}
    return {"cells": [[c.dist, c.orient] for c in r.cells()], "flags": list(r.flags)}


def parse_relation(g: Granularity, spec: Any) -> FsppRelation:
    """Accepts ``{"cells": [[d, o], ...], "flags": [...]}`` or ``{"hex": ...}``.

    A bare list is read as a cell list.
    """
    if isinstance(spec, list):
        spec = {"cells": spec}
    if not isinstance(spec, dict):
        raise ScenarioError(f"relation spec must be an object or list, got {type(spec).__name__}")
    flags = spec.get("flags", [])
    if not isinstance(flags, list) or any(f not in FLAG_NAMES for f in flags):
        raise ScenarioError(f"flags must be a list drawn from {list(FLAG_NAMES)}, got {flags!r}")
    if "hex" in spec:
        text = spec["hex"]
        try:
            bits = int(text, 16) if text else 0
        except (TypeError, ValueError):
            raise ScenarioError(f"bad hex relation {text!r}") from None
        if bits >> g.size:
            raise ScenarioError("hex relation has bits beyond the grid")
        return FsppRelation.from_hex(g, text, flags)
    cells = spec.get("cells", [])
    try:
        return FsppRelation.from_cells(g, [tuple(c) for c in cells], flags)
    except (TypeError, IndexError, ValueError) as exc:
        raise ScenarioError(f"bad cell list: {exc}") from None


# -- scenarios -------------------------------------------------------------------


@dataclass
class Scenario:
    granularity: Granularity
    points: dict[str, Point] = field(default_factory=dict)
    constraints: list[tuple[tuple[str, str, str], FsppRelation]] = field(default_factory=list)
    queries: list[dict] = field(default_factory=list)


def _granularity(spec: dict, default: Optional[Granularity]) -> Granularity:
    base = default or Granularity()
    try:
        return Granularity(
            int(spec.get("orientations", base.m_orient)),
            int(spec.get("distances", base.n_dist)),
            float(spec.get("base_length", base.base_length)),
            float(spec.get("ratio", base.ratio)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad granularity: {exc}") from None


def parse_scenario(data: bytes | str, default: Optional[Granularity] = None) -> Scenario:
    """Read a JSON scenario.

    Shape::

        {"granularity": {"orientations": 18, "distances": 20},
         "points": {"A": [0, 0], ...},
         "constraints": [{"triple": ["A", "B", "C"], "relation": {...}}],
         "queries": [{"path": ["A", "B", "C", "D"]}]}

    Constraints may omit ``relation`` when all three points are given; the
    relation is then classified from the coordinates.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ScenarioError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    g = _granularity(doc.get("granularity", {}), default)
    points = {}
    for name, xy in doc.get("points", {}).items():
        if not (isinstance(xy, list) and len(xy) == 2):
            raise ScenarioError(f"point {name!r} needs [x, y]")
        points[name] = Point(float(xy[0]), float(xy[1]))
    constraints = []
    for k, entry in enumerate(doc.get("constraints", [])):
        triple = entry.get("triple") if isinstance(entry, dict) else None
        if not (isinstance(triple, list) and len(triple) == 3 and len(set(triple)) == 3):
            raise ScenarioError(f"constraint {k} needs a triple of three distinct ids")
        if "relation" in entry:
            rel = parse_relation(g, entry["relation"])
        else:
            missing = [p for p in triple if p not in points]
            if missing:
                raise ScenarioError(f"constraint {k} has no relation and unknown points {missing}")
            rel = FsppRelation.from_classification(g, classify(g, *(points[p] for p in triple)))
        constraints.append((tuple(triple), rel))
    queries = doc.get("queries", [])
    if not isinstance(queries, list):
        raise ScenarioError("queries must be a list")
    return Scenario(g, points, constraints, queries)


def serialize_scenario(s: Scenario) -> str:
    g = s.granularity
    doc = {
        "granularity": {
            "orientations": g.m_orient, "distances": g.n_dist,
            "base_length": g.base_length, "ratio": g.ratio,
        },
        "points": {k: [p.x, p.y] for k, p in s.points.items()},
        "constraints": [
            {"triple": list(t), "relation": serialize_relation(r)} for t, r in s.constraints
        ],
        "queries": s.queries,
    }
    return json.dumps(doc, indent=2)
