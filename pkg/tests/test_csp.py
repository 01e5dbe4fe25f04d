import itertools
import random

import pytest

from fspp.calculus import Granularity, Point, classify
from fspp.csp import (
    Network, add_constraint, consistent, network_from, propagate_path, refine, unary_closure,
)
from fspp.errors import GranularityMismatchError, MissingConstraintError
from fspp.reasoning import compose
from fspp.relation import FsppRelation


def rel(g, *cells, flags=()):
    return FsppRelation.from_cells(g, cells, flags)


def truth(g, pts, triple):
    return classify(g, *(pts[p] for p in triple))


@pytest.fixture
def scene():
    return {
        "A": Point(0.0, 0.0), "B": Point(1.0, 0.0), "C": Point(1.8, 0.9),
        "D": Point(2.5, 3.0), "E": Point(-1.0, 2.0), "F": Point(4.0, -1.0),
    }


def seeded(g, pts, triples):
    return network_from(g, [(t, FsppRelation.from_classification(g, truth(g, pts, t))) for t in triples])


class TestAddConstraint:
    def test_store_and_intersect(self, g18):
        net = Network(g18)
        add_constraint(net, ("A", "B", "C"), rel(g18, (1, 1), (1, 2)))
        assert net[("A", "B", "C")] == rel(g18, (1, 1), (1, 2))
        add_constraint(net, ("A", "B", "C"), rel(g18, (1, 2), (1, 3)))
        assert net[("A", "B", "C")] == rel(g18, (1, 2))
        add_constraint(net, ("A", "B", "C"), FsppRelation.universal(g18))
        assert net[("A", "B", "C")] == rel(g18, (1, 2))

    def test_absent_is_universal(self, g18):
        assert Network(g18).get(("X", "Y", "Z")) == FsppRelation.universal(g18)

    def test_errors(self, g18):
        net = Network(g18)
        with pytest.raises(GranularityMismatchError):
            net.add_constraint(("A", "B", "C"), FsppRelation.universal(Granularity(16, 12)))
        with pytest.raises(ValueError):
            net.add_constraint(("A", "A", "C"), FsppRelation.universal(g18))


class TestConsistent:
    def test_empty_network(self, g18):
        assert consistent(Network(g18))

    def test_empty_relation(self, g18):
        net = network_from(g18, [(("A", "B", "C"), FsppRelation.empty(g18))])
        assert not consistent(net)


class TestUnaryClosure:
    def test_one_constraint_gives_six(self, g18, scene):
        net = unary_closure(seeded(g18, scene, [("A", "B", "C")]))
        assert set(net.constraints) == set(itertools.permutations("ABC"))

    def test_views_contain_truth(self, g18, scene):
        net = unary_closure(seeded(g18, scene, [("A", "B", "C"), ("B", "D", "E")]))
        for t, r in net.constraints.items():
            assert r.contains_classification(truth(g18, scene, t))

    def test_idempotent(self, g18, scene):
        once = unary_closure(seeded(g18, scene, [("A", "B", "C")]))
        assert unary_closure(once).constraints == once.constraints

    def test_input_untouched(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C")])
        unary_closure(net)
        assert list(net.constraints) == [("A", "B", "C")]


class TestRefine:
    def test_chain_creates_composition(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C"), ("B", "C", "D")])
        out = refine(net)
        assert out[("A", "B", "D")] == compose(net[("A", "B", "C")], net[("B", "C", "D")])
        assert out.sweeps >= 1

    def test_monotone(self, g18, scene):
        net = unary_closure(seeded(g18, scene, [("A", "B", "C"), ("B", "C", "D"), ("C", "D", "E")]))
        out = refine(net)
        for t, r in net.constraints.items():
            assert out[t] <= r

    def test_ground_truth_is_kept(self, g18, scene):
        triples = list(itertools.permutations(scene, 3))
        rng = random.Random(3)
        net = refine(unary_closure(seeded(g18, scene, rng.sample(triples, 25))))
        assert consistent(net)
        for t, r in net.constraints.items():
            assert r.contains_classification(truth(g18, scene, t))
        assert net.sweeps < 50

    def test_contradiction_empties(self, g18, scene):
        # force (A, B, D) outside everything the chain allows
        net = seeded(g18, scene, [("A", "B", "C"), ("B", "C", "D")])
        allowed = compose(net[("A", "B", "C")], net[("B", "C", "D")])
        net.add_constraint(("A", "B", "D"), ~allowed)
        assert consistent(net)
        assert not consistent(refine(net))

    def test_sweep_limit(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C"), ("B", "C", "D")])
        with pytest.raises(RuntimeError):
            refine(net, max_sweeps=0)


class TestPropagatePath:
    def test_three_points(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C")])
        assert propagate_path(net, "ABC") == net[("A", "B", "C")]

    def test_four_points_fold(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C"), ("B", "C", "D")])
        assert propagate_path(net, "ABCD") == compose(net[("A", "B", "C")], net[("B", "C", "D")])

    def test_fold_order(self, g18, scene):
        ts = [("A", "B", "C"), ("B", "C", "D"), ("C", "D", "E")]
        net = seeded(g18, scene, ts)
        r1, r2, r3 = (net[t] for t in ts)
        assert propagate_path(net, "ABCDE") == compose(r1, compose(r2, r3))

    def test_six_point_truth(self, g18):
        rng = random.Random(6)
        for _ in range(10):
            names = "PQRSTU"
            pts = {k: Point(rng.uniform(0, 20), rng.uniform(0, 20)) for k in names}
            path = list(names)
            net = seeded(g18, pts, [tuple(path[k:k + 3]) for k in range(4)])
            result = propagate_path(net, path)
            assert result.contains_classification(truth(g18, pts, ("P", "Q", "U")))

    def test_missing(self, g18, scene):
        net = seeded(g18, scene, [("A", "B", "C")])
        with pytest.raises(MissingConstraintError):
            propagate_path(net, "ABCD")
        with pytest.raises(ValueError):
            propagate_path(net, "AB")
