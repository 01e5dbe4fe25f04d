import json
import math
import random

import pytest

from fspp import doi
from fspp.calculus import CellIndex, Granularity, Point, classify
from fspp.doi import Doi
from fspp.errors import GranularityMismatchError
from fspp.grid import fill_relation
from fspp.reasoning import (
    PERMUTATIONS, UnaryOp, cell_to_doi, compose, compose_bordered, compose_direct, doi_to_relation,
    expand, neighbors, rotate_bits, unary,
)
from fspp.relation import FsppRelation
from helpers import DATA, random_blob, random_relation

PI = math.pi


def cells(*pairs):
    return {CellIndex(*p) for p in pairs}


class TestCellDoi:
    def test_first_cell(self, g_small):
        d = cell_to_doi(g_small, CellIndex(0, 0))
        assert (d.r_min, d.r_max, d.phi_min, d.phi_max) == pytest.approx((0, 2, 0, PI / 4))

    def test_back_sector_is_signed(self, g_small):
        d = cell_to_doi(g_small, CellIndex(1, 4))
        assert d.phi_min == pytest.approx(-PI)
        assert d.phi_max == pytest.approx(-3 * PI / 4)

    def test_every_cell_valid(self, g18):
        for c in g18.cells():
            d = cell_to_doi(g18, c)
            assert d.width == pytest.approx(g18.sector_width)
        assert math.isinf(cell_to_doi(g18, CellIndex(19, 0)).r_max)


class TestRasterize:
    def test_full_is_universal_plus_sam(self, g_small):
        r = doi_to_relation(g_small, Doi.full())
        assert r.cell_count() == g_small.size and r.flags == ("sam",)

    def test_interior_doi(self, g_small):
        r = doi_to_relation(g_small, Doi(2.5, 3.0, 0.1, 0.2))
        assert set(r.cells()) == cells((1, 0)) and not r.has_special()

    def test_cell_doi_touches_its_neighbours(self, g_small):
        # closed rectangles: the cell plus every cell sharing an edge or corner
        r = doi_to_relation(g_small, cell_to_doi(g_small, CellIndex(2, 3)))
        expected = {CellIndex(d, o % 8) for d in (1, 2, 3) for o in (2, 3, 4)}
        assert set(r.cells()) == expected

    def test_zero_radius_sets_sam(self, g_small):
        assert doi_to_relation(g_small, Doi(0.0, 1.0, 0.1, 0.2)).sam

    def test_rasterization_covers_samples(self, g18):
        rng = random.Random(4)
        for seed in range(200):
            lo = rng.uniform(0, 20)
            hi = rng.uniform(-PI, PI)
            d = Doi.window(lo, lo + rng.uniform(0, 10), hi - rng.uniform(0, PI), hi)
            r = doi_to_relation(g18, d)
            v = doi.sample(d, seed)
            a, b = Point(-1.0, 0.0), Point(0.0, 0.0)
            c = Point(v.r * math.cos(v.phi), v.r * math.sin(v.phi))
            if v.r > 1e-6:
                assert r.contains_classification(classify(g18, a, b, c))


class TestCompose:
    def test_empty(self, g18):
        r = FsppRelation.from_cells(g18, [(3, 3)])
        assert compose(FsppRelation.empty(g18), r).is_empty()
        assert compose(r, FsppRelation.empty(g18)).is_empty()

    def test_mismatch(self, g18, g_small):
        with pytest.raises(GranularityMismatchError):
            compose(FsppRelation.universal(g18), FsppRelation.universal(g_small))

    def test_demo_snapshot(self, g18):
        a = FsppRelation.from_cells(g18, [(3, 5), (3, 6), (4, 6)])
        b = FsppRelation.from_cells(g18, [(15, 4)])
        assert set(compose(a, b).cells()) == {CellIndex(d, o) for d in (14, 15, 16) for o in range(8, 12)}

    @pytest.mark.parametrize("g", [Granularity(8, 5, 1.0, 2.0), Granularity(18, 20)])
    def test_fast_matches_direct(self, g):
        rng = random.Random(g.size)
        for _ in range(30):
            r1 = random_relation(g, rng, 0.03, flags=False)
            r2 = random_relation(g, rng, 0.03, flags=False)
            assert compose(r1, r2) == compose_direct(r1, r2)

    def test_rotation(self, g18):
        bits = FsppRelation.from_cells(g18, [(2, 17), (5, 3)]).bits
        rotated = FsppRelation(g18, rotate_bits(g18, bits, 2))
        assert set(rotated.cells()) == cells((2, 1), (5, 5))
        assert rotate_bits(g18, bits, 18) == bits

    def test_distributes_over_union_and_is_monotone(self, g_small):
        rng = random.Random(9)
        for _ in range(30):
            a, b, c = (random_relation(g_small, rng, 0.1, flags=False) for _ in range(3))
            assert compose(a | b, c) == compose(a, c) | compose(b, c)
            assert compose(a & b, c) <= compose(a, c)
            assert compose(c, a & b) <= compose(c, b)

    def test_specials(self, g18):
        tri = FsppRelation(g18, tri=True)
        dou = FsppRelation(g18, dou=True)
        one = FsppRelation.from_cells(g18, [(3, 3)])
        assert compose(tri, tri) == tri
        assert compose(tri, one) == FsppRelation.universal(g18)
        assert compose(one, dou) == FsppRelation.universal(g18)

    def test_sound_on_samples(self, g18):
        rng = random.Random(12)
        for _ in range(500):
            a, b, c, d = (Point(rng.uniform(0, 20), rng.uniform(0, 20)) for _ in range(4))
            r1 = FsppRelation.from_classification(g18, classify(g18, a, b, c))
            r2 = FsppRelation.from_classification(g18, classify(g18, b, c, d))
            assert compose(r1, r2).contains_classification(classify(g18, a, b, d))

    def test_coincident_points_are_covered(self, g18):
        # D = A makes (A, B, D) a straight-back relation at distance |AB|
        a, b, c = Point(0, 0), Point(1, 0), Point(1.5, 0.7)
        r1 = FsppRelation.from_classification(g18, classify(g18, a, b, c))
        r2 = FsppRelation.from_classification(g18, classify(g18, b, c, a))
        assert compose(r1, r2).contains_classification(classify(g18, a, b, a))
        # D = B gives sam
        r3 = FsppRelation.from_classification(g18, classify(g18, b, c, b))
        assert compose(r1, r3).sam


class TestBordered:
    def test_single_cells(self, g18):
        a = FsppRelation.from_cells(g18, [(3, 5)])
        b = FsppRelation.from_cells(g18, [(12, 9)])
        assert compose_bordered(a, b) == compose(a, b)

    def test_demo(self, g18):
        a = FsppRelation.from_cells(g18, [(3, 5), (3, 6), (4, 6)])
        b = FsppRelation.from_cells(g18, [(15, 4)])
        d = compose(a, b)
        assert compose_bordered(a, d) == compose(a, d)

    def test_random_blobs(self, g18):
        rng = random.Random(21)
        for _ in range(40):
            r1, r2 = random_blob(g18, rng, rng.randint(1, 30)), random_blob(g18, rng, rng.randint(1, 30))
            assert compose_bordered(r1, r2) == compose(r1, r2)

    def test_archived_hollow_rings(self, g18):
        # operands with holes: border composition sees the filled operands
        spec = json.loads((DATA / "bordered_ring_counterexample.json").read_text())
        a = FsppRelation.from_cells(g18, spec["first"])
        b = FsppRelation.from_cells(g18, spec["second"])
        bordered = compose_bordered(a, b)
        assert bordered != compose(a, b)
        assert compose(a, b) <= bordered
        assert bordered == compose(fill_relation(a), fill_relation(b))

    def test_archived_holefree_counterexamples(self, g18):
        # solid connected operands, but the exact composition itself encloses holes
        spec = json.loads((DATA / "bordered_holefree_counterexamples.json").read_text())
        for case in spec["cases"]:
            a = FsppRelation.from_cells(g18, case["first"])
            b = FsppRelation.from_cells(g18, case["second"])
            assert fill_relation(a) == a and fill_relation(b) == b
            exact = compose(a, b)
            assert exact == compose_direct(a, b)
            assert fill_relation(exact) != exact
            assert compose_bordered(a, b) == fill_relation(exact)


class TestUnary:
    def test_id(self, g18):
        r = random_relation(g18, random.Random(1))
        assert unary(UnaryOp.ID, r) is r

    def test_sc_fixture(self, g18):
        out = unary(UnaryOp.SC, FsppRelation.from_cells(g18, [(15, 4)]))
        assert set(out.cells()) == {CellIndex(15, o) for o in range(9, 14)}
        assert not out.has_special()

    def test_sc_back_half(self, g18):
        out = unary("sc", FsppRelation.from_cells(g18, [(2, 12)]))
        assert set(out.cells()) == {CellIndex(2, o) for o in range(3, 9)}

    def test_sc_back_sector_may_hit_origin(self, g18):
        assert unary(UnaryOp.SC, FsppRelation.from_cells(g18, [(2, 8)])).dou

    def test_sc_preserves_distance(self, g18):
        rng = random.Random(2)
        for _ in range(50):
            r = random_relation(g18, rng, 0.05, flags=False)
            assert {c.dist for c in unary(UnaryOp.SC, r).cells()} == {c.dist for c in r.cells()}

    @pytest.mark.parametrize("op", [UnaryOp.INV, UnaryOp.SC, UnaryOp.SCI, UnaryOp.HM, UnaryOp.HMI])
    def test_soundness_on_samples(self, g18, op):
        rng = random.Random(op.value)
        perm = PERMUTATIONS[op]
        for _ in range(500):
            pts = [Point(rng.uniform(0, 20), rng.uniform(0, 20)) for _ in range(3)]
            r = FsppRelation.from_classification(g18, classify(g18, *pts))
            assert unary(op, r).contains_classification(classify(g18, *(pts[i] for i in perm)))

    @pytest.mark.parametrize("op", [UnaryOp.INV, UnaryOp.SC, UnaryOp.SCI, UnaryOp.HM, UnaryOp.HMI])
    def test_special_flags_follow_permutation(self, g18, op):
        perm = PERMUTATIONS[op]
        configs = {
            "dou": (Point(0, 0), Point(0, 0), Point(2, 1)),
            "sam": (Point(0, 0), Point(1.5, 0.5), Point(1.5, 0.5)),
            "tri": (Point(1, 1), Point(1, 1), Point(1, 1)),
        }
        for flag, pts in configs.items():
            image = unary(op, FsppRelation(g18, **{flag: True}))
            assert image.contains_classification(classify(g18, *(pts[i] for i in perm)))

    def test_raster_inverse_is_sound(self, g18):
        # the alternative inverse composes the two back sectors cell by cell
        rng = random.Random(5)
        for _ in range(300):
            a, b, c = (Point(rng.uniform(0, 20), rng.uniform(0, 20)) for _ in range(3))
            r = FsppRelation.from_classification(g18, classify(g18, a, b, c))
            image = unary(UnaryOp.INV, r, raster_inv=True)
            assert image.contains_classification(classify(g18, b, a, c))

    def test_composites_are_sequences(self, g18):
        r = FsppRelation.from_cells(g18, [(4, 2), (7, 11)])
        sc, inv = (lambda x: unary(UnaryOp.SC, x)), (lambda x: unary(UnaryOp.INV, x))
        assert unary(UnaryOp.SCI, r) == inv(sc(r))
        assert unary(UnaryOp.HM, r) == sc(inv(r))
        assert unary(UnaryOp.HMI, r) == sc(inv(sc(r)))


class TestNeighbourhood:
    def test_inner_ring(self, g18):
        assert neighbors(g18, (0, 0)) == cells((0, 1), (0, 17), (1, 0))

    def test_interior(self, g18):
        assert len(neighbors(g18, (5, 5))) == 4

    def test_outer_ring(self, g18):
        assert neighbors(g18, (19, 3)) == cells((19, 2), (19, 4), (18, 3))

    def test_index_error(self, g18):
        with pytest.raises(IndexError):
            neighbors(g18, (20, 0))

    def test_expand(self, g18):
        assert expand(FsppRelation.empty(g18)).is_empty()
        r = FsppRelation.from_cells(g18, [(5, 5)], ["sam"])
        out = expand(r)
        assert set(out.cells()) == cells((5, 5)) | neighbors(g18, (5, 5))
        assert out.flags == ("sam",)

    def test_expand_monotone(self, g18):
        rng = random.Random(8)
        for _ in range(30):
            r = random_relation(g18, rng, 0.1)
            assert r <= expand(r)
