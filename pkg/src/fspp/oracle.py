"""Sampling checks that compare symbolic results with concrete geometry."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from . import doi as doi_mod
from .calculus import Granularity, Point, classify
from .csp import consistent, network_from, refine, unary_closure
from .doi import Doi, PolarVector
from .reasoning import PERMUTATIONS, UnaryOp, compose, unary
from .relation import FsppRelation


@dataclass
class Report:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        status = "ok" if self.ok else "FAIL"
        return f"{self.name}: {status} ({self.checked} checked, {len(self.violations)} violations)"


def random_doi(rng: random.Random, allow_inf: bool = True) -> Doi:
    """A valid DOI with some mass on degenerate and boundary shapes."""
    r_min = rng.choice([0.0, rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)])
    span = rng.choice([0.0, rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)])
    r_max = math.inf if allow_inf and rng.random() < 0.05 else r_min + span
    width = rng.choice([0.0, math.pi, rng.uniform(0.0, math.pi), rng.uniform(0.0, math.pi)])
    hi = rng.choice([math.pi, rng.uniform(-math.pi, math.pi), rng.uniform(-math.pi, math.pi)])
    return Doi.window(r_min, r_max, hi - width, hi)


def _sample_vector(d: Doi, rng: random.Random) -> PolarVector:
    r_hi = d.r_max if math.isfinite(d.r_max) else 10.0 * max(d.r_min, 1.0) + 50.0
    u = rng.random()
    # favour the corners, where tightness is decided
    r = d.r_min if u < 0.1 else r_hi if u < 0.2 else rng.uniform(d.r_min, r_hi)
    v = rng.random()
    phi = d.phi_min if v < 0.1 else d.phi_max if v < 0.2 else rng.uniform(d.phi_min, d.phi_max)
    return PolarVector(r, doi_mod.normalize_angle(phi))


def doi_upper_bound(pairs: int = 1000, samples: int = 200, seed: int = 0, tol: float = 1e-9) -> Report:
    rng = random.Random(seed)
    rep = Report("doi upper bound")
    for _ in range(pairs):
        d1, d2 = random_doi(rng), random_doi(rng)
        d3 = doi_mod.compose(d1, d2)
        for _ in range(samples):
            v1, v2 = _sample_vector(d1, rng), _sample_vector(d2, rng)
            v = v1.chain(v2)
            rep.checked += 1
            if not doi_mod.contains(d3, v, tol):
                rep.violations.append((d1, d2, v1, v2))
    return rep


def point_doi_exactness(pairs: int = 1000, seed: int = 0, tol: float = 1e-9) -> Report:
    """Point DOIs compose to the exact chained vector."""
    rng = random.Random(seed)
    rep = Report("point doi exactness")
    for _ in range(pairs):
        v1 = PolarVector(rng.uniform(0.1, 5.0), rng.uniform(-math.pi, math.pi))
        v2 = PolarVector(rng.uniform(0.1, 5.0), rng.uniform(-3.0, 3.0))
        if abs(v1.r - v2.r) < 1e-3 and abs(abs(v2.phi) - math.pi) < 1e-3:
            continue
        d = doi_mod.compose(Doi(v1.r, v1.r, v1.phi, v1.phi), Doi(v2.r, v2.r, v2.phi, v2.phi))
        v = v1.chain(v2)
        rep.checked += 1
        dphi = abs(doi_mod.normalize_angle(d.phi_max - v.phi))
        if d.is_full or abs(d.r_min - v.r) > tol or abs(d.r_max - v.r) > tol or dphi > tol or d.width > tol:
            rep.violations.append((v1, v2, d))
    return rep


def _random_point(rng: random.Random, box: float) -> Point:
    return Point(rng.uniform(0.0, box), rng.uniform(0.0, box))


def _separated(points, margin: float) -> bool:
    return all(math.dist(p, q) > margin for p, q in itertools.combinations(points, 2))


def composition_soundness(g: Granularity, samples: int = 10000, seed: int = 0,
                          box: float = 20.0, margin: float = 1e-6) -> Report:
    rng = random.Random(seed)
    rep = Report("composition soundness")
    while rep.checked < samples:
        a, b, c, d = (_random_point(rng, box) for _ in range(4))
        if not _separated((a, b, c, d), margin):
            continue
        r1 = FsppRelation.from_classification(g, classify(g, a, b, c))
        r2 = FsppRelation.from_classification(g, classify(g, b, c, d))
        rep.checked += 1
        if not compose(r1, r2).contains_classification(classify(g, a, b, d)):
            rep.violations.append((a, b, c, d))
    return rep


def unary_soundness(g: Granularity, op: UnaryOp, samples: int = 10000, seed: int = 0,
                    box: float = 20.0, margin: float = 1e-6) -> Report:
    rng = random.Random(seed)
    rep = Report(f"unary {op.value} soundness")
    perm = PERMUTATIONS[op]
    while rep.checked < samples:
        pts = tuple(_random_point(rng, box) for _ in range(3))
        if not _separated(pts, margin):
            continue
        r = FsppRelation.from_classification(g, classify(g, *pts))
        moved = tuple(pts[i] for i in perm)
        rep.checked += 1
        if not unary(op, r).contains_classification(classify(g, *moved)):
            rep.violations.append(pts)
    return rep


def csp_soundness(g: Granularity, scenarios: int = 100, seed: int = 0, points: int = 6,
                  seeded_fraction: float = 0.25, box: float = 20.0) -> Report:
    """Networks seeded from real points stay consistent and keep the truth."""
    rep = Report("csp soundness")
    names = [chr(ord("A") + k) for k in range(points)]
    for s in range(scenarios):
        rng = random.Random(seed * 100003 + s)
        pts = {k: _random_point(rng, box) for k in names}
        triples = list(itertools.permutations(names, 3))
        chosen = rng.sample(triples, max(1, int(seeded_fraction * len(triples))))
        truth = {t: classify(g, *(pts[p] for p in t)) for t in triples}
        net = network_from(g, [(t, FsppRelation.from_classification(g, truth[t])) for t in chosen])
        net = refine(unary_closure(net))
        rep.checked += 1
        if not consistent(net):
            rep.violations.append((s, "inconsistent"))
            continue
        for t, r in net.constraints.items():
            if not r.contains_classification(truth[t]):
                rep.violations.append((s, t))
    return rep


def run_all(g: Granularity, samples: int, seed: int) -> list[Report]:
    reports = [
        doi_upper_bound(pairs=max(1, samples // 10), samples=20, seed=seed),
        point_doi_exactness(pairs=samples, seed=seed),
        composition_soundness(g, samples=samples, seed=seed),
    ]
    for op in (UnaryOp.INV, UnaryOp.SC, UnaryOp.SCI, UnaryOp.HM, UnaryOp.HMI):
        reports.append(unary_soundness(g, op, samples=samples, seed=seed))
    return reports
