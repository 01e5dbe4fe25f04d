"""General relations: sets of grid cells plus the three special flags."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Iterator

from .calculus import CellIndex, Classification, Granularity, SpecialRel, bit_index, cell_at
from .errors import GranularityMismatchError

FLAG_NAMES = ("dou", "tri", "sam")


@dataclass(frozen=True)
class FsppRelation:
    """Cells are bits of an int, bit ``orient + dist * m`` for cell (dist, orient)."""

    granularity: Granularity
    bits: int = 0
    dou: bool = False
    tri: bool = False
    sam: bool = False

    def __post_init__(self):
        mask = (1 << self.granularity.size) - 1
        if self.bits & ~mask:
            object.__setattr__(self, "bits", self.bits & mask)

    # -- construction --------------------------------------------------

    @classmethod
    def empty(cls, g: Granularity) -> "FsppRelation":
        return cls(g)

    @classmethod
    def universal(cls, g: Granularity) -> "FsppRelation":
        return cls(g, (1 << g.size) - 1, True, True, True)

    @classmethod
    def from_cells(cls, g: Granularity, cells: Iterable, flags: Iterable[str] = ()) -> "FsppRelation":
        bits = 0
        for c in cells:
            bits |= 1 << bit_index(g, CellIndex(*c))
        flags = set(flags)
        unknown = flags - set(FLAG_NAMES)
        if unknown:
            raise ValueError(f"unknown flags {sorted(unknown)}")
        return cls(g, bits, "dou" in flags, "tri" in flags, "sam" in flags)

    @classmethod
    def from_classification(cls, g: Granularity, cl: Classification) -> "FsppRelation":
        flags = [cl.special.value] if cl.special is not None else []
        return cls.from_cells(g, cl.cells, flags)

    # -- access ----------------------------------------------------------

    @property
    def flags(self) -> tuple[str, ...]:
        return tuple(name for name in FLAG_NAMES if getattr(self, name))

    @property
    def flag_bits(self) -> int:
        return self.dou | (self.tri << 1) | (self.sam << 2)

    def get_cell(self, c) -> bool:
        return bool(self.bits >> bit_index(self.granularity, CellIndex(*c)) & 1)

    def set_cell(self, c, value: bool = True) -> "FsppRelation":
        bit = 1 << bit_index(self.granularity, CellIndex(*c))
        return replace(self, bits=self.bits | bit if value else self.bits & ~bit)

    def with_flags(self, **flags: bool) -> "FsppRelation":
        return replace(self, **flags)

    def cells(self) -> Iterator[CellIndex]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield cell_at(self.granularity, low.bit_length() - 1)
            bits ^= low

    def has_special(self) -> bool:
        return self.dou or self.tri or self.sam

    def cell_count(self) -> int:
        return self.bits.bit_count()

    def is_empty(self) -> bool:
        return self.bits == 0 and not self.has_special()

    def __len__(self) -> int:
        return self.cell_count() + len(self.flags)

    def __contains__(self, item) -> bool:
        if isinstance(item, str):
            return item in self.flags
        if isinstance(item, SpecialRel):
            return item.value in self.flags
        return self.get_cell(item)

    def contains_classification(self, cl: Classification) -> bool:
        if cl.special is not None:
            return cl.special.value in self.flags
        return all(self.get_cell(c) for c in cl.cells)

    # -- set algebra -----------------------------------------------------

    def _check(self, other: "FsppRelation") -> None:
        if self.granularity != other.granularity:
            raise GranularityMismatchError(f"{self.granularity} vs {other.granularity}")

    def union(self, other: "FsppRelation") -> "FsppRelation":
        self._check(other)
        return FsppRelation(
            self.granularity, self.bits | other.bits,
            self.dou or other.dou, self.tri or other.tri, self.sam or other.sam,
        )

    def intersect(self, other: "FsppRelation") -> "FsppRelation":
        self._check(other)
        return FsppRelation(
            self.granularity, self.bits & other.bits,
            self.dou and other.dou, self.tri and other.tri, self.sam and other.sam,
        )

    def difference(self, other: "FsppRelation") -> "FsppRelation":
        self._check(other)
        return FsppRelation(
            self.granularity, self.bits & ~other.bits,
            self.dou and not other.dou, self.tri and not other.tri, self.sam and not other.sam,
        )

    def complement(self) -> "FsppRelation":
        return FsppRelation.universal(self.granularity).difference(self)

    def is_subset(self, other: "FsppRelation") -> bool:
        self._check(other)
        return self.difference(other).is_empty()

    __or__ = union
    __and__ = intersect
    __sub__ = difference
    __invert__ = complement
    __le__ = is_subset

    def equals(self, other: "FsppRelation") -> bool:
        return self == other

    # -- hex codec ---------------------------------------------------------

    def to_hex(self) -> str:
        digits = -(-self.granularity.size // 4)
        return f"{self.bits:0{digits}x}"

    @classmethod
    def from_hex(cls, g: Granularity, text: str, flags: Iterable[str] = ()) -> "FsppRelation":
        rel = cls.from_cells(g, (), flags)
        return replace(rel, bits=int(text, 16) if text else 0)

    def __repr__(self) -> str:
        cells = ", ".join(str(c) for c in self.cells())
        flags = "".join(f" +{f}" for f in self.flags)
        return f"FsppRelation({{{cells}}}{flags})"


def universal(g: Granularity) -> FsppRelation:
    return FsppRelation.universal(g)


def from_cells(g: Granularity, cells: Iterable, flags: Iterable[str] = ()) -> FsppRelation:
    return FsppRelation.from_cells(g, cells, flags)
