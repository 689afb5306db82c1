"""
Silicon area of the on-chip memories and the PE array.

A macro is sized as its SRAM bitcell array scaled by the device's cell ratio, plus
periphery (decoders, sense amplifiers, bank routing) that does not depend on the
device. The periphery overhead comes from the capacity bracket of the macro, so a
small scratchpad pays relatively more than a 1 MB global buffer.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import pandas as pd

from ..arch.model import ArchitectureSpec, AssignmentVariant, MemoryAssignment
from ..energy.model import variant_assignments
from ..technology.devices import DeviceKind
from ..technology.library import TechLibrary, default_library

logger = logging.getLogger(__name__)

UM2_PER_MM2 = 1e6


@dataclass(frozen=True)
class AreaEstimate:
    """Areas in mm^2; `levels` holds all instances of a level"""
    arch_name: str
    variant: AssignmentVariant
    device: Optional[DeviceKind]
    node: int
    levels: Dict[str, float] = field(hash=False)
    compute: float = 0.0

    @property
    def label(self) -> str:
        if self.variant is AssignmentVariant.SRAM_ONLY:
            return 'SRAM'
        return f"{self.variant.name}-{self.device.value if self.device else 'mixed'}"

    @property
    def memory(self) -> float:
        return sum(self.levels.values())

    @property
    def total(self) -> float:
        return self.memory + self.compute

    def savings_vs(self, baseline: 'AreaEstimate') -> float:
        if baseline.total <= 0:
            raise ValueError(f"baseline area of {baseline.arch_name} is zero")
        return 1.0 - self.total / baseline.total


def memory_area(capacity_bytes: int, device: DeviceKind, node: int,
                library: Optional[TechLibrary] = None) -> float:
    """mm^2 of a single macro"""
    if capacity_bytes <= 0:
        raise ValueError(f"capacity must be positive, got {capacity_bytes}")
    library = library or default_library()
    array = capacity_bytes * 8 * library.cell_area_um2(DeviceKind.SRAM, node)
    periphery = library.periphery_bracket(capacity_bytes).factor
    # array shrinks by the cell ratio, periphery stays (factor - 1) x the SRAM array
    return array * (library.bitcell_ratio(device) + periphery - 1.0) / UM2_PER_MM2


def total_area(arch: ArchitectureSpec, asg: MemoryAssignment, node: int,
               library: Optional[TechLibrary] = None, memory_only: bool = False) -> AreaEstimate:
    library = library or default_library()
    levels = {}
    for level in arch.levels:
        one = memory_area(level.capacity, asg.device(level.technology_slot), node, library)
        levels[level.name] = one * arch.instance_count(level)
    compute = 0.0 if memory_only else arch.pe_count * library.pe_area(node) / UM2_PER_MM2
    return AreaEstimate(arch_name=arch.name, variant=asg.variant, device=asg.nvm_device,
                        node=node, levels=levels,
                        compute=compute)


def compare_areas(arch: ArchitectureSpec, node: int,
                  devices: Sequence[DeviceKind] = (DeviceKind.VGSOT,),
                  library: Optional[TechLibrary] = None,
                  memory_only: bool = False) -> Dict[str, AreaEstimate]:
    """SramOnly plus P0/P1 per device, keyed by assignment label"""
    library = library or default_library()
    out = {}
    for asg in variant_assignments(arch, devices):
        out[asg.label] = total_area(arch, asg, node, library, memory_only)
    base = out['SRAM']
    for label, est in out.items():
        logger.debug(f"{arch.name}@{node}nm {label}: {est.total:.3f} mm2 "
                     f"(saves {est.savings_vs(base):.1%})")
    return out


def area_frame(estimates: Sequence[AreaEstimate]) -> pd.DataFrame:
    """arch,variant,level,area_mm2 with compute as its own row"""
    rows = []
    for est in estimates:
        for name, mm2 in est.levels.items():
            rows.append({'arch': est.arch_name, 'variant': est.label, 'level': name,
                         'area_mm2': mm2})
        if est.compute:
            rows.append({'arch': est.arch_name, 'variant': est.label, 'level': 'PE',
                         'area_mm2': est.compute})
    return pd.DataFrame(rows, columns=['arch', 'variant', 'level', 'area_mm2'])


def area_summary(estimates: Sequence[AreaEstimate]) -> pd.DataFrame:
    """One row per architecture, node and device: SramOnly, P0, P1 totals and savings"""
    baselines = {(e.arch_name, e.node): e for e in estimates
                 if e.variant is AssignmentVariant.SRAM_ONLY}
    rows: Dict[tuple, dict] = {}
    for est in estimates:
        if est.variant is AssignmentVariant.SRAM_ONLY:
            continue
        base = baselines[(est.arch_name, est.node)]
        key = (est.arch_name, est.node, est.device.value if est.device else 'mixed')
        row = rows.setdefault(key, {'arch': key[0], 'node_nm': key[1], 'device': key[2],
                                    'sram_mm2': base.total})
        name = est.variant.name.lower()
        row[f'{name}_mm2'] = est.total
        row[f'{name}_savings'] = est.savings_vs(base)
    return pd.DataFrame(list(rows.values()),
                        columns=['arch', 'node_nm', 'device', 'sram_mm2', 'p0_mm2', 'p1_mm2',
                                 'p0_savings', 'p1_savings'])
