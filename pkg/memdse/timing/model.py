"""
Inference latency under a single memory-limited chip clock
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

from ..arch.model import ArchitectureSpec, MemoryAssignment
from ..mapper.profile import AccessProfile
from ..technology.library import TechLibrary, default_library

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LatencyEstimate:
    compute_cycles: int
    base_frequency: float  # Hz, scaled to node
    memory_limited_frequency: float  # Hz, the effective clock (<= base_frequency)
    level_frequency: Dict[str, float] = field(hash=False)  # Hz each level could sustain
    stall_cycles: Dict[str, int] = field(hash=False)  # base-clock cycles lost to each level
    bottleneck: str = "compute"
    utilization: float = 1.0

    @property
    def latency(self) -> float:
        """Seconds"""
        return self.compute_cycles / self.memory_limited_frequency

    @property
    def latency_ms(self) -> float:
        return self.latency * 1e3

    @property
    def frequency_mhz(self) -> float:
        return self.memory_limited_frequency / 1e6


def scaled_base_frequency(arch: ArchitectureSpec, node: int, library: TechLibrary) -> float:
    return arch.base_frequency / library.factor('latency', arch.base_node, node)


def inference_latency(profile: AccessProfile, arch: ArchitectureSpec, asg: MemoryAssignment,
                      node: int, library: Optional[TechLibrary] = None) -> LatencyEstimate:
    """Clock = min(scaled base frequency, per level max_bandwidth / (demand x access time))"""
    library = library or default_library()
    f_base = scaled_base_frequency(arch, node, library)

    level_freq: Dict[str, float] = {}
    for level in arch.levels:
        demand = profile.bandwidth_demand.get(level.name, 0.0)
        if demand <= 0:
            level_freq[level.name] = math.inf
            continue
        t_access = library.resolve(level, asg, node).access_latency * 1e-9
        level_freq[level.name] = level.max_bandwidth / (demand * t_access)

    clock, bottleneck = f_base, "compute"
    for name, f in level_freq.items():
        if f < clock:
            clock, bottleneck = f, name

    cycles = profile.cycles
    stalls = {name: (max(0, math.ceil(cycles * f_base / f) - cycles) if math.isfinite(f) else 0)
              for name, f in level_freq.items()}

    est = LatencyEstimate(
        compute_cycles=cycles, base_frequency=f_base, memory_limited_frequency=clock,
        level_frequency=level_freq, stall_cycles=stalls, bottleneck=bottleneck,
        utilization=profile.utilization,
    )
    logger.debug(f"{arch.name}@{node}nm {asg.label}: {est.frequency_mhz:.1f} MHz "
                 f"(bound by {bottleneck}), {est.latency_ms:.4g} ms")
    return est
