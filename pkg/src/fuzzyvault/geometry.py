"""Plane geometry helpers: minimum-distance point sets and the hexagonal
chaff lattice with nearest-site quantization."""

from __future__ import annotations

import math

from .seeds import as_rng


class PlacementError(RuntimeError):
    """Rejection sampling could not place the requested number of points."""

    def __init__(self, message: str, placed: int):
        super().__init__(message)
        self.placed = placed


class SnappingError(RuntimeError):
    """A minutia could not be assigned a free lattice site nearby."""


class PointGrid:
    """Bucketed point set for O(1) neighbourhood queries.

    The bucket size must be >= the largest query radius, so that a 3x3
    bucket neighbourhood always covers the query disk.
    """

    def __init__(self, cell: float):
        self.cell = float(cell)
        self._cells: dict[tuple[int, int], list[tuple[float, float]]] = {}
        self.count = 0

    def add(self, x: float, y: float) -> None:
        key = (int(x // self.cell), int(y // self.cell))
        self._cells.setdefault(key, []).append((x, y))
        self.count += 1

    def _near(self, x: float, y: float):
        cx, cy = int(x // self.cell), int(y // self.cell)
        cells = self._cells
        for i in (cx - 1, cx, cx + 1):
            for j in (cy - 1, cy, cy + 1):
                pts = cells.get((i, j))
                if pts:
                    yield from pts

    def too_close(self, x: float, y: float, dist: float) -> bool:
        """True when some stored point lies strictly closer than dist."""
        d2 = dist * dist
        for px, py in self._near(x, y):
            dx, dy = px - x, py - y
            if dx * dx + dy * dy < d2:
                return True
        return False

    def any_within(self, x: float, y: float, dist: float) -> bool:
        """True when some stored point lies within dist (inclusive)."""
        d2 = dist * dist
        for px, py in self._near(x, y):
            dx, dy = px - x, py - y
            if dx * dx + dy * dy <= d2:
                return True
        return False


class HexLattice:
    """A jittered hexagonal lattice clipped to a pixel frame.

    Nearest-neighbour spacing is exactly d: rows sit at pitch d*sqrt(3)/2
    and alternate rows are offset by d/2.  The lattice origin is jittered
    uniformly over one fundamental domain (seeded), so absolute site
    positions leak no alignment between vaults built from different seeds.
    Only sites whose nearest pixel centre falls inside the frame are kept.
    """

    def __init__(self, width: int, height: int, d: float, seed):
        if d <= 0:
            raise ValueError("lattice spacing must be positive")
        rng = as_rng(seed)
        self.width = width
        self.height = height
        self.d = float(d)
        self.pitch = d * math.sqrt(3) / 2.0
        self.origin_x = rng.uniform(0.0, d)
        self.origin_y = rng.uniform(0.0, self.pitch)
        sites: list[tuple[float, float]] = []
        self._by_cell: dict[tuple[int, int], int] = {}
        row = 0
        while True:
            y = self.origin_y + row * self.pitch
            if y >= height - 0.5:
                break
            start = (self.origin_x + (d / 2.0 if row % 2 else 0.0)) % d
            col = 0
            x = start
            while x < width - 0.5:
                self._by_cell[(row, col)] = len(sites)
                sites.append((x, y))
                col += 1
                x = start + col * d
            row += 1
        self.sites = tuple(sites)

    def _window(self, x: float, y: float, radius_cells: int = 2):
        row0 = round((y - self.origin_y) / self.pitch)
        col0 = round((x - self.origin_x) / self.d)
        for r in range(row0 - radius_cells, row0 + radius_cells + 1):
            for c in range(col0 - radius_cells, col0 + radius_cells + 1):
                idx = self._by_cell.get((r, c))
                if idx is not None:
                    yield idx

    def nearest(self, x: float, y: float) -> tuple[int, float]:
        """Index and distance of the closest site.  For points inside the
        frame the distance is at most d/sqrt(3) plus edge effects."""
        best, best_d2 = -1, math.inf
        for idx in self._window(x, y):
            sx, sy = self.sites[idx]
            d2 = (sx - x) ** 2 + (sy - y) ** 2
            if d2 < best_d2:
                best, best_d2 = idx, d2
        if best < 0:  # degenerate frame; fall back to a full scan
            for idx, (sx, sy) in enumerate(self.sites):
                d2 = (sx - x) ** 2 + (sy - y) ** 2
                if d2 < best_d2:
                    best, best_d2 = idx, d2
        if best < 0:
            raise SnappingError("lattice has no sites")
        return best, math.sqrt(best_d2)

    def snap(self, points) -> list[tuple[int, float]]:
        """Assign each point the nearest free site, in input order.

        Raises SnappingError when competition for sites would push an
        assignment farther than d away (no free neighbour).
        """
        taken: set[int] = set()
        out: list[tuple[int, float]] = []
        for x, y in points:
            candidates = sorted(
                (
                    ((self.sites[i][0] - x) ** 2 + (self.sites[i][1] - y) ** 2, i)
                    for i in self._window(x, y)
                    if i not in taken
                ),
            )
            if not candidates or candidates[0][0] > self.d * self.d:
                raise SnappingError(
                    f"no free lattice site within {self.d} of point ({x}, {y})"
                )
            d2, idx = candidates[0]
            taken.add(idx)
            out.append((idx, math.sqrt(d2)))
        return out
