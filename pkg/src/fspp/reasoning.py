"""Inference on relations: composition, unary transformations, neighbourhood.

Composition works cell by cell.  Each cell is an annulus sector, i.e. a
DOI, so two cells compose through DOI composition and the resulting DOI
is rasterized back onto the grid.  Rotating the first cell by whole
sectors rotates the result the same way, so only cells at orientation 0
are composed explicitly and the rest follow by bit rotation.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache

from . import doi as doi_mod
from .calculus import BOUNDARY_TOL, CellIndex, Granularity, cell_bounds
from .doi import Doi
from .errors import GranularityMismatchError
from .grid import Connectivity, contour, fill_relation
from .relation import FsppRelation

TWO_PI = 2.0 * math.pi


class UnaryOp(Enum):
    ID = "id"
    INV = "inv"
    SC = "sc"
    SCI = "sci"
    HM = "hm"
    HMI = "hmi"


# where each op sends (A, B, C), as indices into the original triple
PERMUTATIONS = {
    UnaryOp.ID: (0, 1, 2),
    UnaryOp.INV: (1, 0, 2),
    UnaryOp.SC: (0, 2, 1),
    UnaryOp.SCI: (2, 0, 1),
    UnaryOp.HM: (1, 2, 0),
    UnaryOp.HMI: (2, 1, 0),
}


# -- cells and DOIs ----------------------------------------------------------


def cell_to_doi(g: Granularity, c: CellIndex) -> Doi:
    r_lo, r_hi, phi_lo, phi_hi = cell_bounds(g, CellIndex(*c))
    if phi_lo >= math.pi - BOUNDARY_TOL:
        phi_lo -= TWO_PI
        phi_hi -= TWO_PI
    return Doi(r_lo, r_hi, phi_lo, phi_hi)


def _arcs_meet(lo1: float, hi1: float, lo2: float, hi2: float, tol: float) -> bool:
    """Closed circular arcs [lo1, hi1] and [lo2, hi2] share a point."""
    shift = TWO_PI * math.floor((lo1 - lo2) / TWO_PI)
    lo2 += shift
    hi2 += shift
    for k in (0, 1, 2):
        if lo2 + k * TWO_PI - tol <= hi1 and lo1 <= hi2 + k * TWO_PI + tol:
            return True
    return False


@lru_cache(maxsize=None)
def _band_masks(g: Granularity) -> tuple[int, int]:
    row = (1 << g.m_orient) - 1
    return row, sum(1 << (i * g.m_orient) for i in range(g.n_dist))


def doi_to_relation(g: Granularity, d: Doi, tol: float = BOUNDARY_TOL) -> FsppRelation:
    """Cells whose closed rectangle meets the closed region of ``d``."""
    if d.is_full:
        return FsppRelation.universal(g).with_flags(dou=False, tri=False)
    ds = g.distances
    bands = [
        i for i in range(g.n_dist)
        if ds.inner(i) <= d.r_max + tol and d.r_min <= ds.outer(i) + tol
    ]
    w = g.sector_width
    sector_bits = 0
    for j in range(g.m_orient):
        if _arcs_meet(d.phi_min, d.phi_max, j * w, (j + 1) * w, tol):
            sector_bits |= 1 << j
    bits = 0
    for i in bands:
        bits |= sector_bits << (i * g.m_orient)
    return FsppRelation(g, bits, sam=d.r_min <= tol)


# -- composition -------------------------------------------------------------


def _check(a: FsppRelation, b: FsppRelation) -> Granularity:
    if a.granularity != b.granularity:
        raise GranularityMismatchError(f"{a.granularity} vs {b.granularity}")
    return a.granularity


def compose_cells(g: Granularity, a: CellIndex, b: CellIndex) -> FsppRelation:
    """Direct pipeline: cell DOIs, DOI composition, rasterization."""
    d = doi_mod.compose(cell_to_doi(g, a), cell_to_doi(g, b), r_cap=g.r_cap)
    return doi_to_relation(g, d)


@lru_cache(maxsize=None)
def _base_composition(g: Granularity, dist1: int, dist2: int, orient2: int) -> tuple[int, bool]:
    r = compose_cells(g, CellIndex(dist1, 0), CellIndex(dist2, orient2))
    return r.bits, r.sam


@lru_cache(maxsize=None)
def _rotation_masks(g: Granularity, j: int) -> int:
    # per band, the low m - j orientation bits that shift up without wrapping
    row_low = (1 << (g.m_orient - j)) - 1
    return sum(row_low << (i * g.m_orient) for i in range(g.n_dist))


def rotate_bits(g: Granularity, bits: int, j: int) -> int:
    """Shift every cell's orientation by ``j`` sectors (mod m)."""
    m = g.m_orient
    j %= m
    if j == 0:
        return bits
    low = _rotation_masks(g, j)
    return ((bits & low) << j) | ((bits & ~low) >> (m - j))


def _special_composition(r1: FsppRelation, r2: FsppRelation) -> tuple[FsppRelation, bool]:
    """Contribution of atomic pairs involving a special relation.

    Only tri with tri is informative.  Any other pair with a special atom is
    unconstrained.  The flag says whether the result is already universal.
    """
    g = r1.granularity

    def absorbs(a: FsppRelation, b: FsppRelation) -> bool:
        non_tri_b = b.bits or b.dou or b.sam
        return (a.dou or a.sam) and not b.is_empty() or a.tri and bool(non_tri_b)

    if absorbs(r1, r2) or absorbs(r2, r1):
        return FsppRelation.universal(g), True
    return FsppRelation(g, tri=r1.tri and r2.tri), False


def compose(r1: FsppRelation, r2: FsppRelation) -> FsppRelation:
    """Weak composition: (A,B,C) and (B,C,D) to (A,B,D)."""
    g = _check(r1, r2)
    if r1.is_empty() or r2.is_empty():
        return FsppRelation.empty(g)
    special, done = _special_composition(r1, r2)
    if done:
        return special
    second = list(r2.cells())
    per_dist: dict[int, tuple[int, bool]] = {}
    bits = 0
    sam = False
    for a in r1.cells():
        if a.dist not in per_dist:
            u_bits, u_sam = 0, False
            for b in second:
                # rotate so the first cell sits at orientation 0
                b_bits, b_sam = _base_composition(g, a.dist, b.dist, b.orient)
                u_bits |= b_bits
                u_sam |= b_sam
            per_dist[a.dist] = (u_bits, u_sam)
        u_bits, u_sam = per_dist[a.dist]
        bits |= rotate_bits(g, u_bits, a.orient)
        sam |= u_sam
    return FsppRelation(g, bits, sam=sam).union(special)


def compose_direct(r1: FsppRelation, r2: FsppRelation) -> FsppRelation:
    """Reference composition evaluating every atomic pair without shortcuts."""
    g = _check(r1, r2)
    if r1.is_empty() or r2.is_empty():
        return FsppRelation.empty(g)
    out, done = _special_composition(r1, r2)
    if done:
        return out
    for a in r1.cells():
        for b in r2.cells():
            out = out.union(compose_cells(g, a, b))
    return out


def compose_bordered(r1: FsppRelation, r2: FsppRelation,
                     connectivity: Connectivity = Connectivity.EIGHT) -> FsppRelation:
    """Compose only the traced borders of both operands, then fill the holes."""
    _check(r1, r2)
    raw = compose(contour(r1, connectivity), contour(r2, connectivity))
    return fill_relation(raw)


# -- unary operations --------------------------------------------------------


def _back_cells(g: Granularity) -> int:
    half = g.m_orient // 2
    sector_bits = (1 << (half - 1)) | (1 << half)
    _, col = _band_masks(g)
    return col * sector_bits


def _flag_image(g: Granularity, op: UnaryOp, flag: str) -> FsppRelation:
    """Image of a special relation under an op, from the permuted triple."""
    if flag == "tri" or op is UnaryOp.ID:
        return FsppRelation.empty(g).with_flags(**{flag: True})
    back = FsppRelation(g, _back_cells(g))
    sam = FsppRelation(g, sam=True)
    dou = FsppRelation(g, dou=True)
    table = {
        "dou": {UnaryOp.INV: dou, UnaryOp.SC: back, UnaryOp.SCI: sam, UnaryOp.HM: back, UnaryOp.HMI: sam},
        "sam": {UnaryOp.INV: back, UnaryOp.SC: sam, UnaryOp.SCI: back, UnaryOp.HM: dou, UnaryOp.HMI: dou},
    }
    return table[flag][op]


def _iter_bits(bits: int):
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@lru_cache(maxsize=None)
def _sc_cell(g: Granularity, k: int) -> tuple[int, int]:
    """Cells and flag bits of the SC image of the cell at bit ``k``."""
    m = g.m_orient
    half = m // 2
    dist, orient = divmod(k, m)
    if orient < half:
        orients = range(half, half + orient + 1)
    else:
        orients = range(orient - half, half)
    out = 0
    for o in orients:
        out |= 1 << (o + dist * m)
    # the referent may coincide with the origin when it lies straight behind
    dou = orient in (half - 1, half)
    return out, int(dou)


# direction straight back along the reference, any distance
BACK_RAY = Doi(0.0, math.inf, math.pi, math.pi)


@lru_cache(maxsize=None)
def _inv_cell(g: Granularity, k: int, raster: bool) -> tuple[int, int]:
    cell = CellIndex(*divmod(k, g.m_orient))
    if raster:
        r = compose(FsppRelation(g, _back_cells(g)), FsppRelation.from_cells(g, [cell]))
    else:
        d = doi_mod.compose(BACK_RAY, cell_to_doi(g, cell), r_cap=g.r_cap)
        r = doi_to_relation(g, d)
    return r.bits, r.flag_bits


def _flags_from_bits(flag_bits: int) -> dict:
    return {"dou": bool(flag_bits & 1), "tri": bool(flag_bits & 2), "sam": bool(flag_bits & 4)}


def _apply_primitive(op: UnaryOp, r: FsppRelation, raster: bool) -> FsppRelation:
    g = r.granularity
    bits = flag_bits = 0
    for k in _iter_bits(r.bits):
        b, f = _sc_cell(g, k) if op is UnaryOp.SC else _inv_cell(g, k, raster)
        bits |= b
        flag_bits |= f
    out = FsppRelation(g, bits, **_flags_from_bits(flag_bits))
    for flag in r.flags:
        out = out.union(_flag_image(g, op, flag))
    return out


_SEQUENCES = {
    UnaryOp.INV: (UnaryOp.INV,),
    UnaryOp.SC: (UnaryOp.SC,),
    UnaryOp.SCI: (UnaryOp.SC, UnaryOp.INV),
    UnaryOp.HM: (UnaryOp.INV, UnaryOp.SC),
    UnaryOp.HMI: (UnaryOp.SC, UnaryOp.INV, UnaryOp.SC),
}


def unary(op: UnaryOp | str, r: FsppRelation, raster_inv: bool = False) -> FsppRelation:
    """Image of ``r`` when the roles of the three points are permuted.

    Composite ops apply the primitives in sequence to the cells; special
    relations map through their own table, which is tighter than pushing
    them through the sequence.
    """
    op = UnaryOp(op) if isinstance(op, str) else op
    if op is UnaryOp.ID:
        return r
    bits, flag_bits = _unary_bits(op, r.granularity, r.bits, r.flag_bits, raster_inv)
    return FsppRelation(r.granularity, bits, **_flags_from_bits(flag_bits))


@lru_cache(maxsize=65536)
def _unary_bits(op: UnaryOp, g: Granularity, bits: int, flag_bits: int, raster: bool) -> tuple[int, int]:
    cells = FsppRelation(g, bits)
    for step in _SEQUENCES[op]:
        cells = _apply_primitive(step, cells, raster)
    for flag, on in _flags_from_bits(flag_bits).items():
        if on:
            cells = cells.union(_flag_image(g, op, flag))
    return cells.bits, cells.flag_bits


# -- neighbourhood -------------------------------------------------------------


def neighbors(g: Granularity, c) -> set[CellIndex]:
    c = CellIndex(*c)
    g.check_cell(c)
    m = g.m_orient
    out = {CellIndex(c.dist, (c.orient + 1) % m), CellIndex(c.dist, (c.orient - 1) % m)}
    if c.dist > 0:
        out.add(CellIndex(c.dist - 1, c.orient))
    if c.dist < g.n_dist - 1:
        out.add(CellIndex(c.dist + 1, c.orient))
    return out


def expand(r: FsppRelation) -> FsppRelation:
    g = r.granularity
    cells = set(r.cells())
    for c in list(cells):
        cells |= neighbors(g, c)
    return FsppRelation.from_cells(g, cells, r.flags)


__all__ = [
    "BACK_RAY", "PERMUTATIONS", "UnaryOp", "cell_to_doi", "compose", "compose_bordered",
    "compose_cells", "compose_direct", "doi_to_relation", "expand", "neighbors", "rotate_bits", "unary",
]
