"""
Build duty-cycle scenarios from mapped workloads
"""
import logging
from typing import Dict, Optional, Sequence

from ..arch.model import ArchitectureSpec, AssignmentVariant, MemoryAssignment, MemoryLevel
from ..energy.model import inference_energy
from ..mapper.profile import AccessProfile
from ..technology.devices import DeviceKind
from ..technology.library import MemDeviceParams, TechLibrary, default_library
from ..timing.model import inference_latency
from .model import BufferPower, DutyCycleScenario, VariantPower

logger = logging.getLogger(__name__)


def read_power(level: MemoryLevel, arch: ArchitectureSpec, params: MemDeviceParams) -> float:
    """W drawn by all instances of a level reading at full bandwidth"""
    bits_per_ns = arch.access_width(level) * level.max_bandwidth / params.read_latency
    return params.read_energy * bits_per_ns * arch.instance_count(level) * 1e-3


def standby_power(level: MemoryLevel, arch: ArchitectureSpec, params: MemDeviceParams) -> float:
    return params.standby_ratio * read_power(level, arch, params)


def wakeup_energy(level: MemoryLevel, arch: ArchitectureSpec, params: MemDeviceParams) -> float:
    """J per wake for all instances of a gated level"""
    if params.wakeup_energy is not None:
        return params.wakeup_energy * arch.instance_count(level) * 1e-12
    return standby_power(level, arch, params) * params.wakeup_time * 1e-6


def variant_power(profile: AccessProfile, arch: ArchitectureSpec, asg: MemoryAssignment,
                  node: int, library: TechLibrary) -> VariantPower:
    energy = inference_energy(profile, arch, asg, node, library)
    latency = inference_latency(profile, arch, asg, node, library)
    weight_slots = set(arch.weight_slots)
    buffers = []
    wake_times = []
    for level in arch.levels:
        params = library.resolve(level, asg, node)
        gated = asg.device(level.technology_slot).is_nvm
        wake_times.append(params.wakeup_time * 1e-6)
        buffers.append(BufferPower(
            name=level.name,
            component='weight' if level.technology_slot in weight_slots else 'io',
            energy=energy.level_total(level.name) * 1e-12,
            standby=0.0 if gated else standby_power(level, arch, params),
            wakeup_energy=wakeup_energy(level, arch, params) if gated else 0.0,
            gated=gated,
        ))
    return VariantPower(label=asg.label, buffers=tuple(buffers),
                        active_time=latency.latency, wakeup_time=max(wake_times))


def build_scenario(profile: AccessProfile, arch: ArchitectureSpec, node: int,
                   devices: Sequence[DeviceKind] = (DeviceKind.VGSOT,),
                   ips_min: float = 10.0,
                   variants: Sequence[AssignmentVariant] = (AssignmentVariant.P0, AssignmentVariant.P1),
                   library: Optional[TechLibrary] = None) -> DutyCycleScenario:
    """SRAM baseline plus one NVM variant per (variant, device)"""
    library = library or default_library()
    sram = variant_power(profile, arch, MemoryAssignment.build(arch, AssignmentVariant.SRAM_ONLY),
                         node, library)
    nvm: Dict[str, VariantPower] = {}
    for device in devices:
        for variant in variants:
            asg = MemoryAssignment.build(arch, variant, device)
            nvm[asg.label] = variant_power(profile, arch, asg, node, library)
    logger.debug(f"Duty-cycle scenario {arch.name}@{node}nm: SRAM standby "
                 f"{sram.standby_power:.4g} W, variants {', '.join(nvm)}")
    return DutyCycleScenario(sram=sram, nvm=nvm, ips_min=ips_min)
