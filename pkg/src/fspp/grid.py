"""Boolean grids on a cylinder: neighbourhoods, borders, tracing and filling.

Rows are orientations and wrap around; columns are distances and do not.
Anything outside the distance range counts as inactive (white).
Directions are ``(d_orient, d_dist)`` steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .calculus import CellIndex, Granularity
from .errors import InvalidStartError
from .relation import FsppRelation

Direction = tuple[int, int]

UP: Direction = (-1, 0)
DOWN: Direction = (1, 0)
LEFT: Direction = (0, -1)
RIGHT: Direction = (0, 1)
# canonical start direction: increasing distance, so "left" is orientation - 1
START_DIRECTION = RIGHT


class Connectivity(Enum):
    FOUR = 4
    EIGHT = 8


def turn_left(d: Direction) -> Direction:
    return (-d[1], d[0])


def turn_right(d: Direction) -> Direction:
    return (d[1], -d[0])


@dataclass(frozen=True)
class BoolGrid:
    m: int
    n: int
    active: frozenset = frozenset()

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("grid dimensions must be >= 1")
        cells = frozenset(CellIndex(*c) for c in self.active)
        for c in cells:
            if not (0 <= c.dist < self.n and 0 <= c.orient < self.m):
                raise IndexError(f"cell {c} outside the grid")
        object.__setattr__(self, "active", cells)

    @classmethod
    def from_relation(cls, r: FsppRelation) -> "BoolGrid":
        g = r.granularity
        return cls(g.m_orient, g.n_dist, frozenset(r.cells()))

    @classmethod
    def from_rows(cls, rows: list[str]) -> "BoolGrid":
        """Build from strings of '0'/'1', one per orientation."""
        cells = {
            CellIndex(d, o) for o, row in enumerate(rows) for d, ch in enumerate(row) if ch == "1"
        }
        return cls(len(rows), len(rows[0]), frozenset(cells))

    def to_relation(self, g: Granularity) -> FsppRelation:
        if (g.m_orient, g.n_dist) != (self.m, self.n):
            raise ValueError("granularity does not match grid shape")
        return FsppRelation.from_cells(g, self.active)

    def rows(self) -> list[str]:
        return [
            "".join("1" if CellIndex(d, o) in self.active else "0" for d in range(self.n))
            for o in range(self.m)
        ]

    def __contains__(self, c) -> bool:
        return CellIndex(*c) in self.active

    def __len__(self) -> int:
        return len(self.active)

    def in_range(self, c) -> bool:
        return 0 <= c[0] < self.n

    def step(self, c: CellIndex, d: Direction) -> CellIndex:
        """Neighbour in direction ``d``; the distance may fall out of range."""
        return CellIndex(c.dist + d[1], (c.orient + d[0]) % self.m)

    def is_black(self, c) -> bool:
        return self.in_range(c) and CellIndex(*c) in self.active

    def check(self, c) -> CellIndex:
        c = CellIndex(*c)
        if not (0 <= c.dist < self.n and 0 <= c.orient < self.m):
            raise IndexError(f"cell {c} outside the grid")
        return c


# Moore neighbourhood P1..P8, clockwise from the top-left, as (d_orient, d_dist)
MOORE_OFFSETS: tuple[Direction, ...] = (
    (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1),
)
FOUR_OFFSETS: tuple[Direction, ...] = ((-1, 0), (0, 1), (1, 0), (0, -1))


def _neighbors(g: BoolGrid, cell, offsets) -> list[CellIndex]:
    c = g.check(cell)
    out = []
    for d in offsets:
        nb = g.step(c, d)
        if g.in_range(nb) and nb != c and nb not in out:
            out.append(nb)
    return out


def moore_neighbors(g: BoolGrid, cell) -> list[CellIndex]:
    return _neighbors(g, cell, MOORE_OFFSETS)


def four_neighbors(g: BoolGrid, cell) -> list[CellIndex]:
    return _neighbors(g, cell, FOUR_OFFSETS)


def _offsets(conn: Connectivity):
    return MOORE_OFFSETS if conn is Connectivity.EIGHT else FOUR_OFFSETS


def border_cells(g: BoolGrid, connectivity: Connectivity = Connectivity.EIGHT) -> set[CellIndex]:
    """Active cells with an inactive (or out-of-range) cell in the neighbourhood."""
    offsets = _offsets(connectivity)
    return {c for c in g.active if any(not g.is_black(g.step(c, d)) for d in offsets)}


def component_of(g: BoolGrid, start, connectivity: Connectivity = Connectivity.EIGHT) -> frozenset:
    """The connected set of active cells containing ``start``."""
    offsets = _offsets(connectivity)
    start = CellIndex(*start)
    comp = {start}
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for d in offsets:
            nb = g.step(c, d)
            if nb not in comp and g.is_black(nb):
                comp.add(nb)
                queue.append(nb)
    return frozenset(comp)


def connected_components(g: BoolGrid, connectivity: Connectivity = Connectivity.EIGHT) -> list[frozenset]:
    seen: set = set()
    comps = []
    for start in sorted(g.active, key=lambda c: (c.dist, c.orient)):
        if start not in seen:
            comp = component_of(g, start, connectivity)
            seen |= comp
            comps.append(comp)
    return comps


def _start_direction(g: BoolGrid, c: CellIndex) -> Optional[Direction]:
    """A direction whose left neighbour is white, preferring the canonical one."""
    d = START_DIRECTION
    for _ in range(4):
        if not g.is_black(g.step(c, turn_left(d))):
            return d
        d = turn_right(d)
    return None


def find_start(g: BoolGrid, component: Iterable) -> tuple[CellIndex, Direction]:
    """Minimal (dist, orient) cell whose left neighbour is white.

    The canonical direction is tried first over the whole component; a
    component with no white cell at orientation - 1 falls back to any
    direction with a white left neighbour.
    """
    cells = sorted((CellIndex(*c) for c in component), key=lambda c: (c.dist, c.orient))
    if not cells:
        raise InvalidStartError("empty component")
    left = turn_left(START_DIRECTION)
    for c in cells:
        if not g.is_black(g.step(c, left)):
            return c, START_DIRECTION
    for c in cells:
        d = _start_direction(g, c)
        if d is not None:
            return c, d
    raise InvalidStartError("component has no border cell")


def _trace_loop(g: BoolGrid, start: CellIndex, direction: Direction, connectivity: Connectivity,
                visited_states: set, limit: int) -> list[CellIndex]:
    four = connectivity is Connectivity.FOUR
    c, d = start, direction
    out = [c]
    turns = 0
    steps = 0
    while True:
        if (c, d) in visited_states:
            break
        visited_states.add((c, d))
        steps += 1
        if steps > limit:
            raise RuntimeError("contour trace exceeded its step bound")
        front = g.step(c, d)
        p1 = g.step(front, turn_left(d))
        p3 = g.step(front, turn_right(d))
        if g.is_black(p1) and (not four or g.is_black(front)):
            if four:
                out.append(front)
            c, d = p1, turn_left(d)
        elif g.is_black(front):
            c = front
        elif g.is_black(p3) and (not four or g.is_black(g.step(c, turn_right(d)))):
            if four:
                out.append(g.step(c, turn_right(d)))
            c = p3
        else:
            turns += 1
            if turns == 3:
                break
            d = turn_right(d)
            continue
        turns = 0
        out.append(c)
    return out


def _open_states(g: BoolGrid, cells, visited_states):
    """Unvisited (cell, direction) states whose left neighbour is white."""
    for c in cells:
        d = START_DIRECTION
        for _ in range(4):
            if (c, d) not in visited_states and not g.is_black(g.step(c, turn_left(d))):
                yield c, d
            d = turn_right(d)


def pavlidis_walk(g: BoolGrid, start=None, connectivity: Connectivity = Connectivity.EIGHT,
                  direction: Optional[Direction] = None) -> list[CellIndex]:
    """Cells visited by the boundary-following walk, in first-visit order.

    ``connectivity`` selects the walk.  EIGHT moves diagonally and visits the
    cells of an 8-component that touch white along an edge; FOUR moves only
    orthogonally and visits the cells of a 4-component that touch white at
    an edge or a corner.  One boundary-following loop starts at ``start``.  Further loops start
    from border cells the earlier loops missed, which covers holes and both
    rims of a ring wrapped around the cylinder.
    """
    if start is None:
        comps = connected_components(g, connectivity)
        if not comps:
            return []
        start, direction = find_start(g, comps[0])
    start = g.check(start)
    if start not in g.active:
        raise InvalidStartError(f"start {start} is not active")
    if direction is None:
        direction = START_DIRECTION
    if g.is_black(g.step(start, turn_left(direction))):
        raise InvalidStartError(f"left neighbour of start {start} is not white")
    component = component_of(g, start, connectivity)
    limit = 4 * len(component) + 4
    visited_states: set = set()
    order: dict = {}
    order.update(dict.fromkeys(_trace_loop(g, start, direction, connectivity, visited_states, limit)))
    # every white cell next to the component is circled by some loop; the
    # state generator is lazy, so states consumed by a later loop are skipped
    for s, d in _open_states(g, sorted(component, key=lambda c: (c.dist, c.orient)), visited_states):
        if (s, d) not in visited_states:
            order.update(dict.fromkeys(_trace_loop(g, s, d, connectivity, visited_states, limit)))
    return list(order)


def _dual(conn: Connectivity) -> Connectivity:
    return Connectivity.FOUR if conn is Connectivity.EIGHT else Connectivity.EIGHT


def trace_pavlidis(g: BoolGrid, start=None, connectivity: Connectivity = Connectivity.EIGHT,
                   direction: Optional[Direction] = None) -> list[CellIndex]:
    """Ordered border of the ``connectivity``-component containing ``start``.

    The returned set is exactly ``border_cells(g, connectivity)`` restricted
    to that component.  The component is cut out of the grid and walked with
    the opposite connectivity, because that walk is the one whose visited
    cells have a white cell in the requested neighbourhood.
    """
    if start is None:
        comps = connected_components(g, connectivity)
        if not comps:
            return []
        start, direction = find_start(g, comps[0])
    start = g.check(start)
    if start not in g.active:
        raise InvalidStartError(f"start {start} is not active")
    if direction is None:
        direction = START_DIRECTION
    if g.is_black(g.step(start, turn_left(direction))):
        raise InvalidStartError(f"left neighbour of start {start} is not white")
    component = component_of(g, start, connectivity)
    sub = BoolGrid(g.m, g.n, component)
    walk = _dual(connectivity)
    order = dict.fromkeys(pavlidis_walk(sub, start, walk, direction))
    for piece in connected_components(sub, walk):
        if start in piece:
            continue
        s, d = find_start(sub, piece)
        order.update(dict.fromkeys(pavlidis_walk(sub, s, walk, d)))
    return list(order)


def trace_all(g: BoolGrid, connectivity: Connectivity = Connectivity.EIGHT) -> list[CellIndex]:
    """Traced border cells of every component."""
    out = []
    for comp in connected_components(g, connectivity):
        start, direction = find_start(g, comp)
        out.extend(trace_pavlidis(g, start, connectivity, direction))
    return out


def fill(g: BoolGrid) -> BoolGrid:
    """Activate inactive cells cut off from both distance edges."""
    outside: set = set()
    queue = deque()
    for o in range(g.m):
        for d in {0, g.n - 1}:
            c = CellIndex(d, o)
            if c not in g.active and c not in outside:
                outside.add(c)
                queue.append(c)
    while queue:
        c = queue.popleft()
        for off in FOUR_OFFSETS:
            nb = g.step(c, off)
            if g.in_range(nb) and nb not in g.active and nb not in outside:
                outside.add(nb)
                queue.append(nb)
    holes = {
        CellIndex(d, o) for o in range(g.m) for d in range(g.n)
    } - g.active - outside
    return BoolGrid(g.m, g.n, g.active | holes)


def contour(r: FsppRelation, connectivity: Connectivity = Connectivity.EIGHT) -> FsppRelation:
    """Relation holding only the traced border cells; flags are kept."""
    g = BoolGrid.from_relation(r)
    cells = trace_all(g, connectivity)
    return FsppRelation.from_cells(r.granularity, cells, r.flags)


def fill_relation(r: FsppRelation) -> FsppRelation:
    filled = fill(BoolGrid.from_relation(r))
    return FsppRelation.from_cells(r.granularity, filled.active, r.flags)
