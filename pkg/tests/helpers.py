"""Shared test helpers: reference grid fixtures and random relations."""

import random
from pathlib import Path

from fspp import FsppRelation, Granularity
from fspp.calculus import CellIndex

DATA = Path(__file__).parent / "data"


def reference_block(name: str) -> str:
    return (DATA / f"{name}.txt").read_text()


def random_relation(g: Granularity, rng: random.Random, density: float = 0.1,
                    flags: bool = True) -> FsppRelation:
    cells = [c for c in g.cells() if rng.random() < density]
    chosen = [f for f in ("dou", "tri", "sam") if flags and rng.random() < 0.3]
    return FsppRelation.from_cells(g, cells, chosen)


def random_blob(g: Granularity, rng: random.Random, size: int) -> FsppRelation:
    """A 4-connected set grown by a random walk on the cylinder."""
    c = CellIndex(rng.randrange(g.n_dist), rng.randrange(g.m_orient))
    cells = {c}
    while len(cells) < size:
        dd, do = rng.choice(((0, 1), (0, -1), (1, 0), (-1, 0)))
        nxt = CellIndex(c.dist + dd, (c.orient + do) % g.m_orient)
        if 0 <= nxt.dist < g.n_dist:
            c = nxt
            cells.add(c)
    return FsppRelation.from_cells(g, cells)
