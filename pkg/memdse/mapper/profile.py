"""
Per-inference access counts of a layer or network
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import pandas as pd

from ..arch.model import ArchitectureSpec, DataType

Key = Tuple[str, DataType]


@dataclass(frozen=True)
class AccessCount:
    reads: int = 0
    writes: int = 0

    def __add__(self, other: 'AccessCount') -> 'AccessCount':
        return AccessCount(self.reads + other.reads, self.writes + other.writes)

    def scaled(self, k: int) -> 'AccessCount':
        return AccessCount(self.reads * k, self.writes * k)

    @property
    def total(self) -> int:
        return self.reads + self.writes


class CountSheet:
    """Mutable accumulator used while walking a schedule"""

    def __init__(self):
        self._reads: Dict[Key, int] = {}
        self._writes: Dict[Key, int] = {}

    def read(self, level: str, dt: DataType, n: int = 1) -> None:
        if n:
            self._reads[(level, dt)] = self._reads.get((level, dt), 0) + n

    def write(self, level: str, dt: DataType, n: int = 1) -> None:
        if n:
            self._writes[(level, dt)] = self._writes.get((level, dt), 0) + n

    def freeze(self) -> Dict[Key, AccessCount]:
        keys = set(self._reads) | set(self._writes)
        return {k: AccessCount(self._reads.get(k, 0), self._writes.get(k, 0)) for k in keys}


@dataclass(frozen=True)
class AccessProfile:
    """Reads/writes per (level, datatype) plus MACs, cycles and per-instance bandwidth demand"""
    arch_name: str
    counts: Dict[Key, AccessCount] = field(hash=False)
    total_macs: int
    cycles: int
    bandwidth_demand: Dict[str, float] = field(hash=False)  # sustained words/cycle per instance
    level_order: Tuple[str, ...] = ()
    pe_count: int = 1

    def get(self, level: str, dt: DataType) -> AccessCount:
        return self.counts.get((level, dt), AccessCount())

    def reads(self, level: str, dt: DataType) -> int:
        return self.get(level, dt).reads

    def writes(self, level: str, dt: DataType) -> int:
        return self.get(level, dt).writes

    def level_total(self, level: str) -> AccessCount:
        total = AccessCount()
        for dt in DataType:
            total = total + self.get(level, dt)
        return total

    @property
    def utilization(self) -> float:
        if not self.cycles:
            return 0.0
        return self.total_macs / (self.cycles * self.pe_count)

    def scaled(self, k: int) -> 'AccessProfile':
        """Every count multiplied by k; MACs, cycles and demand unchanged"""
        return AccessProfile(
            arch_name=self.arch_name,
            counts={key: c.scaled(k) for key, c in self.counts.items()},
            total_macs=self.total_macs, cycles=self.cycles,
            bandwidth_demand=dict(self.bandwidth_demand), level_order=self.level_order,
            pe_count=self.pe_count)

    def rows(self) -> List[Dict[str, object]]:
        out = []
        for level in self.level_order:
            for dt in DataType:
                c = self.get(level, dt)
                if c.reads or c.writes:
                    out.append({'level': level, 'datatype': dt.value,
                                'reads': c.reads, 'writes': c.writes})
        return out

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows(), columns=['level', 'datatype', 'reads', 'writes'])

    def to_csv(self, path: Optional[Union[str, Path]] = None) -> str:
        text = self.to_frame().to_csv(index=False, lineterminator='\n')
        if path is not None:
            Path(path).write_text(text)
        return text


def demand_of(arch: ArchitectureSpec, counts: Dict[Key, AccessCount], cycles: int) -> Dict[str, float]:
    """Average words/cycle each instance of a level must serve during `cycles`"""
    demand = {}
    for level in arch.levels:
        total = sum(counts.get((level.name, dt), AccessCount()).total for dt in DataType)
        demand[level.name] = total / (cycles * arch.instance_count(level)) if cycles else 0.0
    return demand


def build_profile(arch: ArchitectureSpec, sheet: CountSheet, macs: int, cycles: int) -> AccessProfile:
    counts = sheet.freeze()
    return AccessProfile(
        arch_name=arch.name, counts=counts, total_macs=macs, cycles=cycles,
        bandwidth_demand=demand_of(arch, counts, cycles),
        level_order=tuple(l.name for l in arch.levels), pe_count=arch.pe_count)


def sum_profiles(arch: ArchitectureSpec, profiles: Iterable[AccessProfile],
                 extra: Optional[CountSheet] = None) -> AccessProfile:
    """Element-wise sum; demand is recomputed over the summed cycles"""
    profiles = list(profiles)
    counts: Dict[Key, AccessCount] = {}
    for p in profiles:
        for key, c in p.counts.items():
            counts[key] = counts.get(key, AccessCount()) + c
    if extra is not None:
        for key, c in extra.freeze().items():
            counts[key] = counts.get(key, AccessCount()) + c
    cycles = sum(p.cycles for p in profiles)
    return AccessProfile(
        arch_name=arch.name, counts=counts,
        total_macs=sum(p.total_macs for p in profiles),
        cycles=cycles,
        bandwidth_demand=demand_of(arch, counts, cycles), level_order=tuple(l.name for l in arch.levels),
        pe_count=arch.pe_count)
