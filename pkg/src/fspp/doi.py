"""Distance/orientation intervals (DOIs) and their composition.

A DOI is an annulus sector anchored at a point with a reference direction:
every polar vector ``(r, phi)`` with ``r_min <= r <= r_max`` and
``phi_min <= phi <= phi_max``.  Composing two DOIs bounds the set of sums
``v1 + v2`` where ``v2`` is measured relative to the direction of ``v1``,
which is how relative positions are chained along a path.

Angles follow the convention ``phi_max in (-pi, pi]`` and
``phi_max - phi_min <= pi`` so ``phi_min`` may drop below ``-pi``.
An unbounded outer radius is ``math.inf``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import UndefinedDirectionError

INF = math.inf
TWO_PI = 2.0 * math.pi

# Angle slack for window membership and span checks.
ANGLE_EPS = 1e-12
# Sum vectors shorter than this have no usable direction.
ZERO_LENGTH = 1e-12


def normalize_angle(phi: float) -> float:
    """Map an angle into ``(-pi, pi]``."""
    phi = math.fmod(phi, TWO_PI)
    if phi <= -math.pi:
        phi += TWO_PI
    elif phi > math.pi:
        phi -= TWO_PI
    return phi


class PolarVector(NamedTuple):
    r: float
    phi: float

    @classmethod
    def from_cartesian(cls, x: float, y: float) -> "PolarVector":
        return cls(math.hypot(x, y), normalize_angle(math.atan2(y, x)))

    def to_cartesian(self) -> tuple[float, float]:
        return self.r * math.cos(self.phi), self.r * math.sin(self.phi)

    def chain(self, other: "PolarVector") -> "PolarVector":
        """Add ``other`` expressed relative to this vector's direction."""
        x1, y1 = self.to_cartesian()
        theta = self.phi + other.phi
        return PolarVector.from_cartesian(
            x1 + other.r * math.cos(theta), y1 + other.r * math.sin(theta)
        )


@dataclass(frozen=True)
class Doi:
    r_min: float
    r_max: float
    phi_min: float
    phi_max: float
    is_full: bool = False

    def __post_init__(self):
        if self.is_full:
            if self.r_min != 0.0 or self.phi_min != -math.pi or self.phi_max != math.pi:
                raise ValueError("a full DOI has r_min=0 and phi in [-pi, pi]")
            return
        if not (0.0 <= self.r_min <= self.r_max):
            raise ValueError(f"need 0 <= r_min <= r_max, got {self.r_min}, {self.r_max}")
        if math.isnan(self.r_max) or math.isinf(self.r_min):
            raise ValueError("r_min must be finite and r_max a number")
        if not (self.phi_min <= self.phi_max):
            raise ValueError(f"need phi_min <= phi_max, got {self.phi_min}, {self.phi_max}")
        if self.phi_max - self.phi_min > math.pi + ANGLE_EPS:
            raise ValueError("angular width exceeds pi")
        if not (-TWO_PI - ANGLE_EPS <= self.phi_min and -math.pi - ANGLE_EPS <= self.phi_max <= math.pi + ANGLE_EPS):
            raise ValueError(f"angle window out of range: [{self.phi_min}, {self.phi_max}]")

    @classmethod
    def full(cls) -> "Doi":
        return cls(0.0, INF, -math.pi, math.pi, is_full=True)

    @classmethod
    def window(cls, r_min: float, r_max: float, phi_min: float, phi_max: float) -> "Doi":
        """Build a DOI from any angle window, shifting it into the convention."""
        width = phi_max - phi_min
        hi = normalize_angle(phi_max)
        return cls(r_min, r_max, hi - width, hi)

    @property
    def width(self) -> float:
        return self.phi_max - self.phi_min

    def contains(self, v: PolarVector, tol: float = 0.0) -> bool:
        return contains(self, v, tol)

    def covers_direction(self, phi: float, tol: float = ANGLE_EPS) -> bool:
        """True if some ``phi + 2*pi*k`` lies in the angle window."""
        if self.is_full:
            return True
        return _in_window(phi, self.phi_min, self.phi_max, tol)


def _in_window(phi: float, lo: float, hi: float, tol: float) -> bool:
    # lift phi to the first representative >= lo - tol
    k = math.ceil((lo - tol - phi) / TWO_PI)
    lifted = phi + k * TWO_PI
    if lifted <= hi + tol:
        return True
    # the representative just below may still sit within tol of lo
    return abs(lifted - TWO_PI - lo) <= tol


def r_sum(r1: float, r2: float, phi1: float, phi2: float) -> float:
    x = r1 * math.cos(phi1) + r2 * math.cos(phi1 + phi2)
    y = r1 * math.sin(phi1) + r2 * math.sin(phi1 + phi2)
    return math.hypot(x, y)


def phi_sum(r1: float, r2: float, phi1: float, phi2: float) -> float:
    """Direction of the chained sum, quadrant-aware, in ``(-pi, pi]``."""
    x = r1 * math.cos(phi1) + r2 * math.cos(phi1 + phi2)
    y = r1 * math.sin(phi1) + r2 * math.sin(phi1 + phi2)
    if math.hypot(x, y) <= ZERO_LENGTH:
        raise UndefinedDirectionError("sum vector has zero length")
    return normalize_angle(math.atan2(y, x))


def contains(d: Doi, v: PolarVector, tol: float = 0.0) -> bool:
    if d.is_full:
        return True
    if v.r < d.r_min - tol or v.r > d.r_max + tol:
        return False
    if v.r <= tol:
        # the origin has no direction; it belongs iff r_min admits it
        return True
    return _in_window(v.phi, d.phi_min, d.phi_max, tol)


def sample(d: Doi, seed: int) -> PolarVector:
    """Deterministic vector inside ``d``, uniform in (r, phi) parameters.

    An unbounded radius is sampled up to ten times the finite extent.
    """
    rng = random.Random(seed)
    if d.is_full:
        return PolarVector(rng.uniform(0.0, 10.0), normalize_angle(rng.uniform(-math.pi, math.pi)))
    r_hi = d.r_max
    if math.isinf(r_hi):
        r_hi = 10.0 * max(d.r_min, 1.0)
    r = rng.uniform(d.r_min, r_hi) if r_hi > d.r_min else d.r_min
    phi = rng.uniform(d.phi_min, d.phi_max) if d.phi_max > d.phi_min else d.phi_min
    return PolarVector(r, normalize_angle(phi))


# -- composition -------------------------------------------------------------


def _default_cap(d1: Doi, d2: Doi) -> float:
    finite = [x for x in (d1.r_min, d1.r_max, d2.r_min, d2.r_max) if math.isfinite(x)]
    return 8.0 * max(finite + [1.0])


def _capped(d1: Doi, d2: Doi, r_cap: Optional[float]):
    cap = _default_cap(d1, d2) if r_cap is None else r_cap
    return (
        d1.r_min,
        min(d1.r_max, max(cap, d1.r_min)),
        d2.r_min,
        min(d2.r_max, max(cap, d2.r_min)),
    )


def _covers_back(d: Doi) -> bool:
    return d.covers_direction(math.pi, tol=0.0)


def origin_reachable(d1: Doi, d2: Doi) -> bool:
    """True if a chained sum can return to the anchor point.

    That needs equal radii and an exactly reversed second step.
    """
    return _covers_back(d2) and d1.r_min <= d2.r_max and d2.r_min <= d1.r_max


def _nearest_in_window(target: float, lo: float, hi: float) -> float:
    """Angle in ``[lo, hi]`` closest to ``target`` modulo a full turn."""
    k = math.ceil((lo - target) / TWO_PI)
    lifted = target + k * TWO_PI
    if lifted <= hi:
        return lifted
    # outside the window: pick the nearer end on the circle
    to_lo = (lo - target) % TWO_PI
    to_hi = (target - hi) % TWO_PI
    return lo if to_lo <= to_hi else hi


def _lift_into(angle: float, lo: float, hi: float) -> Optional[float]:
    k = math.ceil((lo - angle) / TWO_PI)
    lifted = angle + k * TWO_PI
    return lifted if lifted <= hi else None


def compose_min_r(d1: Doi, d2: Doi, r_cap: Optional[float] = None) -> float:
    """Smallest chained-sum length.

    The squared length ``r1^2 + r2^2 + 2 r1 r2 cos(t)`` falls as ``t`` nears
    the back direction, so only the window angle closest to it matters.
    Over the radius box the minimum sits on a corner or on the foot of a
    perpendicular along one edge.
    """
    a, b, c, d = _capped(d1, d2, r_cap)
    if origin_reachable(d1, d2):
        return 0.0
    t = _nearest_in_window(math.pi, d2.phi_min, d2.phi_max)
    ct = math.cos(t)
    cands = [r_sum(r1, r2, 0.0, t) for r1 in (a, b) for r2 in (c, d)]
    for r1 in (a, b):
        foot = -r1 * ct
        if c < foot < d:
            cands.append(r_sum(r1, foot, 0.0, t))
    for r2 in (c, d):
        foot = -r2 * ct
        if a < foot < b:
            cands.append(r_sum(foot, r2, 0.0, t))
    return min(cands)


def compose_max_r(d1: Doi, d2: Doi, r_cap: Optional[float] = None) -> float:
    """Largest chained-sum length.

    The length grows as the relative angle nears straight ahead and is convex
    over the radius box, so a corner at that angle attains the maximum.
    """
    a, b, c, d = _capped(d1, d2, r_cap)
    t = _nearest_in_window(0.0, d2.phi_min, d2.phi_max)
    return max(r_sum(r1, r2, 0.0, t) for r1 in (a, b) for r2 in (c, d))


def _relative_window(d2: Doi) -> tuple[float, float]:
    """The d2 window shifted to sit inside ``(-pi, pi)`` when it can."""
    p, q = d2.phi_min, d2.phi_max
    shift = TWO_PI * math.floor((math.pi - q) / TWO_PI + 0.5)
    if -math.pi < p + shift and q + shift < math.pi:
        return p + shift, q + shift
    return p, q


def relative_angle_candidates(d1: Doi, d2: Doi, r_cap: Optional[float] = None) -> list[float]:
    """Directions of ``r1 + r2 * exp(i * phi2)`` at the extreme parameters.

    For a fixed ``phi2`` the direction is extreme at the radius corners
    (r1_min, r2_max) and (r1_max, r2_min).  Along ``phi2`` it is unimodal,
    peaking where the second step is tangent to the circle of radius r1_min.

    Angles come from one continuous branch so plain min/max applies.  When
    the second step is always the longer one and the window straddles the
    back direction, the branch follows ``phi2`` instead of the reference.
    """
    a, b, c, d = _capped(d1, d2, r_cap)
    follow_second = _covers_back(d2) and c > b
    if follow_second:
        p, q = d2.phi_min, d2.phi_max
        shift = TWO_PI * math.floor((math.pi - p) / TWO_PI)
        p, q = p + shift, q + shift
    else:
        p, q = _relative_window(d2)
    args = [(r1, r2, f2) for f2 in (p, q) for r1 in (a, b) for r2 in (c, d)]
    if d < a:
        tangent = math.pi / 2 + math.asin(d / a)
        for t in (-tangent, tangent):
            lifted = _lift_into(t, p, q)
            if lifted is not None:
                args.append((a, d, lifted))
    out = []
    for r1, r2, f2 in args:
        if follow_second:
            # deflection of the long second step by the short first one
            out.append(f2 + math.atan2(-r1 * math.sin(f2), r2 + r1 * math.cos(f2)))
            continue
        x = r1 + r2 * math.cos(f2)
        y = r2 * math.sin(f2)
        if math.hypot(x, y) > ZERO_LENGTH:
            out.append(math.atan2(y, x))
    # directions approached as an unbounded radius grows
    if math.isinf(d1.r_max):
        out.append(0.0)
    if math.isinf(d2.r_max):
        out += [p, q]
    return out


def compose_phi_bounds(d1: Doi, d2: Doi, r_cap: Optional[float] = None) -> Optional[tuple[float, float]]:
    """Angular bounds of the composition, with the upper end in ``(-pi, pi]``.

    The absolute direction is ``phi1`` plus the relative direction of the
    local sum.  Off the full-circle cases that relative direction stays
    inside ``(-pi, pi)``, so its extremes are a plain min and max.
    Returns ``None`` when every candidate sum vector is degenerate.
    """
    rel = relative_angle_candidates(d1, d2, r_cap)
    if not rel:
        return None
    lo, hi = d1.phi_min + min(rel), d1.phi_max + max(rel)
    width = hi - lo
    hi = normalize_angle(hi)
    return hi - width, hi


def compose(d1: Doi, d2: Doi, r_cap: Optional[float] = None) -> Doi:
    """Upper bound of all chained sums of a vector of ``d1`` and one of ``d2``."""
    if d1.is_full or d2.is_full:
        return Doi.full()
    # the sum can return to the anchor point, so every direction is possible
    if origin_reachable(d1, d2):
        return Doi.full()
    bounds = compose_phi_bounds(d1, d2, r_cap)
    if bounds is None:
        return Doi.full()
    lo, hi = bounds
    if hi - lo > math.pi + ANGLE_EPS:
        return Doi.full()
    cap = _default_cap(d1, d2) if r_cap is None else r_cap
    r_lo = compose_min_r(d1, d2, r_cap)
    r_hi = compose_max_r(d1, d2, r_cap)
    if math.isinf(d1.r_max) or math.isinf(d2.r_max) or r_hi >= cap:
        r_hi = INF
    return Doi(r_lo, max(r_hi, r_lo), lo, min(hi, lo + math.pi))
