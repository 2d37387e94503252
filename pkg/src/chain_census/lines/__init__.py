"""Rotation-line arrangements in R^3 and their incidence statistics."""

from .audits import DegeneracyReport, audit, audit_concurrency, audit_planes, audit_regulus
from .bounds import BOUND_IDS, BoundReport, BoundRow, bound_report, recount_measured, write_report_csv
from .bridge import energy_via_lines
from .incidence import (
    Family,
    IncidenceStructure,
    NuTables,
    build_incidence,
    dyadic_rich_points,
    iterated_lines,
    line_walk_count,
    lines_meeting,
    lines_through_points,
    nested_sets,
    nu_iterates,
    parse_nesting,
    points_in,
    rich_lines_kt,
    rich_points,
)
from .rotation import RigidMotion, RotationLine, build_lines, meets, motion_at, rotation_line

__all__ = [
    "BOUND_IDS", "BoundReport", "BoundRow", "DegeneracyReport", "Family", "IncidenceStructure",
    "NuTables", "RigidMotion", "RotationLine", "audit", "audit_concurrency", "audit_planes",
    "audit_regulus", "bound_report", "build_incidence", "build_lines", "dyadic_rich_points",
    "energy_via_lines", "iterated_lines", "line_walk_count", "lines_meeting", "lines_through_points",
    "meets", "motion_at", "nested_sets", "nu_iterates", "parse_nesting", "points_in",
    "recount_measured", "rich_lines_kt", "rich_points", "rotation_line", "write_report_csv",
]
