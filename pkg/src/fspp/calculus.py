"""Granularity, the polar distance/orientation grid, and point classification.

A ternary configuration (A, B, C) is located by the absolute distance
``|BC|`` and the angle of ``BC`` measured against the direction ``AB``.
Distances fall into geometrically growing bands, angles into ``m`` equal
sectors.  Boundaries are shared, so a configuration lying on a grid line
belongs to every bordering cell.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import NamedTuple, Optional

from .errors import ConfigurationError, DegenerateConfigurationError

INF = math.inf
TWO_PI = 2.0 * math.pi

# Absolute slack for boundary hits (meters and radians alike).
BOUNDARY_TOL = 1e-9


class Point(NamedTuple):
    x: float
    y: float


class CellIndex(NamedTuple):
    dist: int
    orient: int

    def __str__(self) -> str:
        return f"(d{self.dist},o{self.orient})"


class SpecialRel(Enum):
    DOU = "dou"
    TRI = "tri"
    SAM = "sam"


@dataclass(frozen=True)
class DistanceSystem:
    """Band widths and outer radii.  The last outer radius is unbounded."""

    delta: tuple[float, ...]
    delta_cum: tuple[float, ...]
    nominal_last_delta: float
    nominal_last_cum: float

    def inner(self, i: int) -> float:
        return 0.0 if i == 0 else self.delta_cum[i - 1]

    def outer(self, i: int) -> float:
        return self.delta_cum[i]

    @property
    def largest_finite(self) -> float:
        return self.delta_cum[-2]


@dataclass(frozen=True)
class Granularity:
    m_orient: int = 18
    n_dist: int = 20
    base_length: float = 0.10
    ratio: float = 1.25

    def __post_init__(self):
        if self.m_orient < 4 or self.m_orient % 2:
            raise ConfigurationError(f"orientation count must be even and >= 4, got {self.m_orient}")
        if self.n_dist < 2:
            raise ConfigurationError(f"distance count must be >= 2, got {self.n_dist}")
        if not (self.base_length > 0 and math.isfinite(self.base_length)):
            raise ConfigurationError(f"base length must be positive, got {self.base_length}")
        if not (self.ratio > 1 and math.isfinite(self.ratio)):
            raise ConfigurationError(f"ratio must exceed 1, got {self.ratio}")

    @property
    def size(self) -> int:
        return self.m_orient * self.n_dist

    @property
    def sector_width(self) -> float:
        return TWO_PI / self.m_orient

    @cached_property
    def distances(self) -> DistanceSystem:
        return build_distance_system(self)

    @property
    def r_cap(self) -> float:
        """Stand-in radius for the unbounded band during composition."""
        return 8.0 * self.distances.largest_finite

    def cells(self):
        """All cells in ascending bit order."""
        for i in range(self.n_dist):
            for j in range(self.m_orient):
                yield CellIndex(i, j)

    def check_cell(self, c: CellIndex) -> None:
        if not (0 <= c.dist < self.n_dist and 0 <= c.orient < self.m_orient):
            raise IndexError(f"cell {c} outside {self.n_dist} distances x {self.m_orient} orientations")


@dataclass(frozen=True)
class Classification:
    cells: frozenset = field(default_factory=frozenset)
    special: Optional[SpecialRel] = None

    def __post_init__(self):
        if (self.special is None) == (not self.cells):
            raise ValueError("a classification has either cells or a special relation")


def build_distance_system(g: Granularity) -> DistanceSystem:
    # band i is L * rho^(i+1) wide, so the first band is already rho * L
    widths = [g.base_length * g.ratio ** (i + 1) for i in range(g.n_dist)]
    cum = []
    total = 0.0
    for w in widths:
        total += w
        cum.append(total)
    return DistanceSystem(
        delta=tuple(widths[:-1]),
        delta_cum=tuple(cum[:-1]) + (INF,),
        nominal_last_delta=widths[-1],
        nominal_last_cum=cum[-1],
    )


def _angle(p: Point, q: Point) -> float:
    return math.atan2(q.y - p.y, q.x - p.x)


def rel_radius(a: Point, b: Point, c: Point) -> float:
    ab = math.dist(a, b)
    if ab == 0.0:
        raise DegenerateConfigurationError("origin and relatum coincide")
    return math.dist(b, c) / ab


def rel_angle(a: Point, b: Point, c: Point) -> float:
    """Angle of BC relative to the direction AB, in ``[0, 2*pi)``."""
    if a == b or b == c:
        raise DegenerateConfigurationError("relative angle needs A != B and B != C")
    phi = (_angle(b, c) - _angle(a, b)) % TWO_PI
    return 0.0 if phi >= TWO_PI else phi


def distance_bands(g: Granularity, r: float, tol: float = BOUNDARY_TOL) -> list[int]:
    ds = g.distances
    out = []
    for i in range(g.n_dist):
        if ds.inner(i) - tol <= r <= ds.outer(i) + tol:
            out.append(i)
        elif r < ds.inner(i) - tol:
            break
    return out


def orientation_sectors(g: Granularity, phi: float, tol: float = BOUNDARY_TOL) -> list[int]:
    w = g.sector_width
    m = g.m_orient
    j = int(phi // w) % m
    out = {j}
    lo = j * w
    if phi - lo <= tol:
        out.add((j - 1) % m)
    if lo + w - phi <= tol:
        out.add((j + 1) % m)
    # near 2*pi the angle also touches sector 0
    if TWO_PI - phi <= tol:
        out.add(0)
    return sorted(out)


def classify(g: Granularity, a: Point, b: Point, c: Point) -> Classification:
    if a == b:
        return Classification(special=SpecialRel.TRI if b == c else SpecialRel.DOU)
    if b == c:
        return Classification(special=SpecialRel.SAM)
    r = math.dist(b, c)
    phi = rel_angle(a, b, c)
    cells = frozenset(
        CellIndex(i, j) for i in distance_bands(g, r) for j in orientation_sectors(g, phi)
    )
    return Classification(cells=cells)


def cell_bounds(g: Granularity, c: CellIndex) -> tuple[float, float, float, float]:
    g.check_cell(c)
    ds = g.distances
    w = g.sector_width
    return ds.inner(c.dist), ds.outer(c.dist), c.orient * w, (c.orient + 1) * w


def bit_index(g: Granularity, c: CellIndex) -> int:
    g.check_cell(c)
    return c.orient + c.dist * g.m_orient


def cell_at(g: Granularity, k: int) -> CellIndex:
    if not 0 <= k < g.size:
        raise IndexError(f"bit {k} outside [0, {g.size})")
    return CellIndex(k // g.m_orient, k % g.m_orient)


def sample_configuration(g: Granularity, c: CellIndex, reference: tuple[Point, Point], seed: int) -> Point:
    """A point C strictly inside cell ``c`` relative to ``reference = (A, B)``."""
    a, b = reference
    if a == b:
        raise DegenerateConfigurationError("reference points coincide")
    r_lo, r_hi, phi_lo, phi_hi = cell_bounds(g, c)
    if math.isinf(r_hi):
        r_hi = 2.0 * r_lo
    rng = random.Random(seed)
    # keep a margin away from the boundaries so the sample is unambiguous
    margin_r = 0.05 * (r_hi - r_lo)
    margin_phi = 0.05 * (phi_hi - phi_lo)
    r = rng.uniform(r_lo + margin_r, r_hi - margin_r)
    phi = rng.uniform(phi_lo + margin_phi, phi_hi - margin_phi) + _angle(a, b)
    return Point(b.x + r * math.cos(phi), b.y + r * math.sin(phi))
