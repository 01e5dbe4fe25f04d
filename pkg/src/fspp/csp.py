"""Ternary constraint networks over named points.

A network maps ordered triples ``(origin, relatum, referent)`` to relations.
A missing triple stands for the universal relation.  Propagation only ever
intersects, so stored relations shrink monotonically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .calculus import Granularity
from .errors import GranularityMismatchError, MissingConstraintError
from .reasoning import PERMUTATIONS, UnaryOp, compose, unary
from .relation import FsppRelation

Triple = tuple[Hashable, Hashable, Hashable]


def _rel_key(r: FsppRelation) -> tuple[int, int]:
    return r.bits, r.flag_bits


@dataclass
class Network:
    granularity: Granularity
    constraints: dict = field(default_factory=dict)
    # sweeps used by the last refine call
    sweeps: int = 0

    @property
    def variables(self) -> set:
        return {p for t in self.constraints for p in t}

    def copy(self) -> "Network":
        return Network(self.granularity, dict(self.constraints))

    def get(self, triple: Triple) -> FsppRelation:
        return self.constraints.get(tuple(triple), FsppRelation.universal(self.granularity))

    def __getitem__(self, triple: Triple) -> FsppRelation:
        return self.constraints[tuple(triple)]

    def __contains__(self, triple) -> bool:
        return tuple(triple) in self.constraints

    def add_constraint(self, triple: Triple, r: FsppRelation) -> "Network":
        """Intersect ``r`` into the stored relation for ``triple``, in place."""
        triple = tuple(triple)
        if len(triple) != 3 or len(set(triple)) != 3:
            raise ValueError(f"need three distinct points, got {triple}")
        if r.granularity != self.granularity:
            raise GranularityMismatchError(f"{r.granularity} vs {self.granularity}")
        self.constraints[triple] = self.get(triple).intersect(r)
        return self


def add_constraint(net: Network, triple: Triple, r: FsppRelation) -> Network:
    return net.add_constraint(triple, r)


def consistent(net: Network) -> bool:
    return not any(r.is_empty() for r in net.constraints.values())


def unary_closure(net: Network) -> Network:
    """Add every permuted view of every stored triple, repeated to a fixpoint."""
    out = net.copy()
    changed = True
    while changed:
        changed = False
        for triple in sorted(out.constraints, key=repr):
            r = out.constraints[triple]
            for op, perm in PERMUTATIONS.items():
                if op is UnaryOp.ID:
                    continue
                target = tuple(triple[i] for i in perm)
                before = out.get(target)
                after = before.intersect(unary(op, r))
                if target not in out.constraints or after != before:
                    out.constraints[target] = after
                    changed = changed or after != before
    return out


def refine(net: Network, max_sweeps: int = 1000) -> Network:
    """Tighten (A,B,D) by composing (A,B,C) with (B,C,D) until nothing changes."""
    out = net.copy()
    memo: dict = {}
    sweeps = 0
    changed = True
    while changed:
        if sweeps >= max_sweeps:
            raise RuntimeError("refine did not reach a fixpoint")
        sweeps += 1
        changed = False
        by_prefix: dict = {}
        for t in out.constraints:
            by_prefix.setdefault(t[:2], []).append(t)
        for abc in sorted(out.constraints, key=repr):
            a, b, c = abc
            for bcd in sorted(by_prefix.get((b, c), ()), key=repr):
                d = bcd[2]
                if d == a:
                    continue
                r1, r2 = out.constraints[abc], out.constraints[bcd]
                key = (_rel_key(r1), _rel_key(r2))
                comp = memo.get(key)
                if comp is None:
                    comp = memo[key] = compose(r1, r2)
                abd = (a, b, d)
                before = out.get(abd)
                after = before.intersect(comp)
                if abd not in out.constraints or after != before:
                    out.constraints[abd] = after
                    if after != before:
                        changed = True
                        by_prefix.setdefault((a, b), [])
                        if abd not in by_prefix[(a, b)]:
                            by_prefix[(a, b)].append(abd)
    out.sweeps = sweeps
    return out


def propagate_path(net: Network, path: Sequence[Hashable]) -> FsppRelation:
    """Relation of the last point with respect to the first two.

    Folds from the end: rel(p0, p1, pk) = rel(p0, p1, p2) composed with
    rel(p1, p2, pk), and so on down the path.
    """
    path = list(path)
    if len(path) < 3:
        raise ValueError("a path needs at least three points")
    triples = [tuple(path[k:k + 3]) for k in range(len(path) - 2)]
    for t in triples:
        if t not in net.constraints:
            raise MissingConstraintError(f"no constraint stored for {t}")
    acc = net.constraints[triples[-1]]
    for t in reversed(triples[:-1]):
        acc = compose(net.constraints[t], acc)
    return acc


def network_from(g: Granularity, items: Iterable[tuple[Triple, FsppRelation]]) -> Network:
    net = Network(g)
    for triple, r in items:
        net.add_constraint(triple, r)
    return net
