"""
Per-inference energy from access counts and technology bindings
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ..arch.model import ArchitectureSpec, AssignmentVariant, DataType, MemoryAssignment
from ..mapper.profile import AccessProfile
from ..technology.devices import DeviceKind, MRAM_KINDS
from ..technology.library import TechLibrary, default_library

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LevelEnergy:
    read: float  # pJ
    write: float  # pJ

    @property
    def total(self) -> float:
        return self.read + self.write


@dataclass(frozen=True)
class EnergyBreakdown:
    """Single-inference energy in pJ; leakage is handled by the duty-cycle model"""
    compute: float
    levels: Dict[Tuple[str, DataType], LevelEnergy] = field(hash=False)
    label: str = ""

    @property
    def mem_read(self) -> float:
        return sum(e.read for e in self.levels.values())

    @property
    def mem_write(self) -> float:
        return sum(e.write for e in self.levels.values())

    @property
    def mem_total(self) -> float:
        return self.mem_read + self.mem_write

    @property
    def grand_total(self) -> float:
        return self.compute + self.mem_total

    @property
    def read_write_ratio(self) -> float:
        return self.mem_read / self.mem_write if self.mem_write else float('inf')

    def level_total(self, level: str) -> float:
        return sum(e.total for (name, _), e in self.levels.items() if name == level)

    def datatype_total(self, dt: DataType) -> float:
        return sum(e.total for (_, d), e in self.levels.items() if d is dt)

    @property
    def joules(self) -> float:
        return self.grand_total * 1e-12


def inference_energy(profile: AccessProfile, arch: ArchitectureSpec, asg: MemoryAssignment,
                     node: int, library: Optional[TechLibrary] = None) -> EnergyBreakdown:
    """compute = MACs x MAC energy; each level adds reads/writes x access width x pJ/bit"""
    library = library or default_library()
    levels = {}
    for (name, dt), count in sorted(profile.counts.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        level = arch.level(name)
        params = library.resolve(level, asg, node)
        width = arch.access_width(level)
        levels[(name, dt)] = LevelEnergy(
            read=count.reads * width * params.read_energy,
            write=count.writes * width * params.write_energy,
        )
    compute = profile.total_macs * library.mac_energy(node, arch.mac_precision)
    return EnergyBreakdown(compute=compute, levels=levels, label=asg.label)


def edp(e: EnergyBreakdown, latency: float) -> float:
    """Energy-delay product in J*s; latency in seconds"""
    if latency <= 0:
        raise ValueError(f"latency must be positive, got {latency}")
    return e.joules * latency


def variant_assignments(arch: ArchitectureSpec,
                        devices: Sequence[DeviceKind] = MRAM_KINDS) -> List[MemoryAssignment]:
    """SramOnly followed by P0 and P1 for each NVM device"""
    out = [MemoryAssignment.build(arch, AssignmentVariant.SRAM_ONLY)]
    for device in devices:
        out.append(MemoryAssignment.build(arch, AssignmentVariant.P0, device))
        out.append(MemoryAssignment.build(arch, AssignmentVariant.P1, device))
    return out


def compare_variants(profile: AccessProfile, arch: ArchitectureSpec, node: int,
                     devices: Sequence[DeviceKind] = MRAM_KINDS,
                     library: Optional[TechLibrary] = None) -> Dict[str, EnergyBreakdown]:
    """One breakdown per variant from a single access profile"""
    library = library or default_library()
    results = {}
    for asg in variant_assignments(arch, devices):
        results[asg.label] = inference_energy(profile, arch, asg, node, library)
    base = results['SRAM'].grand_total
    for label, e in results.items():
        logger.debug(f"{arch.name}@{node}nm {label}: {e.grand_total:.4g} pJ "
                     f"({e.grand_total / base - 1:+.1%} vs SRAM)")
    return results


def breakdown_frame(results: Dict[str, EnergyBreakdown]) -> pd.DataFrame:
    """variant,level,datatype,read_pj,write_pj,compute_pj"""
    rows = []
    for label, e in results.items():
        for (level, dt), le in e.levels.items():
            rows.append({'variant': label, 'level': level, 'datatype': dt.value,
                         'read_pj': le.read, 'write_pj': le.write, 'compute_pj': 0.0})
        rows.append({'variant': label, 'level': 'PE', 'datatype': 'compute',
                     'read_pj': 0.0, 'write_pj': 0.0, 'compute_pj': e.compute})
    return pd.DataFrame(rows, columns=['variant', 'level', 'datatype', 'read_pj', 'write_pj',
                                       'compute_pj'])


def summary_frame(results: Dict[str, EnergyBreakdown]) -> pd.DataFrame:
    """One row per variant with the memory/compute split"""
    base = results.get('SRAM')
    rows = []
    for label, e in results.items():
        rows.append({
            'variant': label,
            'compute_pj': e.compute,
            'mem_read_pj': e.mem_read,
            'mem_write_pj': e.mem_write,
            'mem_total_pj': e.mem_total,
            'total_pj': e.grand_total,
            'read_write_ratio': e.read_write_ratio,
            'vs_sram': (e.grand_total / base.grand_total - 1.0) if base else float('nan'),
        })
    return pd.DataFrame(rows)
