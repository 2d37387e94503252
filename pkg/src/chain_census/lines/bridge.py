"""Chain energy recounted on the line side."""

from __future__ import annotations

from ..census import ChainMode
from ..configs import PointConfig
from ..errors import SizeGuard
from .incidence import build_incidence, line_walk_count
from .rotation import build_lines

DEFAULT_BRIDGE_POINTS = 100


def energy_via_lines(config: PointConfig, n: int, mode: ChainMode = ChainMode.REPEATS,
                     *, workers: int = 1, max_points: int = DEFAULT_BRIDGE_POINTS) -> int:
    """Count (n+1)-tuples of rotation lines whose consecutive members meet.

    Every ordered pair (p, p') gives a line, including p == p'.  REPEATS
    lets a chain stay on the same line (both chains repeat a point);
    PROPER only steps between distinct lines that cross or are parallel.
    """
    mode = ChainMode.parse(mode)
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(config) > max_points:
        raise SizeGuard(f"{len(config)} points exceed the line-bridge budget of {max_points}")
    IS = build_incidence(build_lines(config, include_diagonal=True), workers=workers)
    return line_walk_count(IS, n, parallel=True, stay=mode is ChainMode.REPEATS)
