"""Arrangement files: the source pairs of a rotation-line arrangement with their canonical lines."""

from __future__ import annotations

import json
from pathlib import Path

from ..configs import PointConfig, config_from_json, config_to_json
from ..errors import MalformedFile
from ..geometry import PlanePoint, as_rational, format_rational
from .rotation import RotationLine, rotation_line


def arrangement_to_json(config: PointConfig, lines: list[RotationLine], diagonal: bool) -> str:
    doc = {
        "config": json.loads(config_to_json(config)),
        "diagonal": diagonal,
        "lines": [
            {
                "source": [[format_rational(c) for c in l.p], [format_rational(c) for c in l.q]],
                "base": [format_rational(c) for c in l.geometry.base],
                "direction": [str(v) for v in l.geometry.direction],
            }
            for l in lines
        ],
    }
    return json.dumps(doc, indent=1)


def save_arrangement(config: PointConfig, lines: list[RotationLine], diagonal: bool, path) -> None:
    Path(path).write_text(arrangement_to_json(config, lines, diagonal) + "\n", encoding="utf-8")


def load_arrangement(path) -> tuple[PointConfig, list[RotationLine], bool]:
    """Read an arrangement, rebuilding each line from its source pair and checking the stored form."""
    source = str(path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        config = config_from_json(json.dumps(doc["config"]), source=f"{source}:config")
        diagonal = bool(doc["diagonal"])
        entries = doc["lines"]
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"{source}: missing or malformed field {exc}") from None
    lines = []
    for k, entry in enumerate(entries):
        try:
            (px, py), (qx, qy) = entry["source"]
            line = rotation_line(PlanePoint.of(px, py), PlanePoint.of(qx, qy))
            base = tuple(as_rational(c) for c in entry["base"])
            direction = tuple(int(v) for v in entry["direction"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedFile(f"{source}: lines[{k}]: {exc}") from None
        if line.geometry.base != base or line.geometry.direction != direction:
            raise MalformedFile(f"{source}: lines[{k}]: stored canonical form does not match its source pair")
        lines.append(line)
    return config, lines, diagonal
