"""
Scenarios: one workload on one architecture/assignment/node, run through every model
"""
import logging
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from .. import __version__
from ..area.model import AreaEstimate, total_area
from ..arch.builtins import ALIASES, builtin_architectures, get_architecture
from ..arch.model import ArchitectureSpec, AssignmentVariant, MemoryAssignment
from ..config import config
from ..duty_cycle.model import DutyCycleScenario, PowerCurve, power_curve, savings_at
from ..duty_cycle.scenario import build_scenario
from ..energy.model import EnergyBreakdown, edp, inference_energy
from ..errors import IpsRangeError, MemdseError, ScenarioError
from ..mapper.mapper import NetworkProfile, map_network
from ..technology.devices import DeviceKind
from ..technology.library import TechLibrary, default_library, load_tech_library
from ..timing.model import LatencyEstimate, inference_latency
from ..utils import file_sha256
from ..workload.loader import load_network, network_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    workload: str  # bundled name or path
    arch: str  # builtin name or path
    variant: AssignmentVariant = AssignmentVariant.SRAM_ONLY
    device: DeviceKind = DeviceKind.VGSOT  # NVM used by P0/P1 and by the duty-cycle comparison
    node: int = 7
    ips_min: float = 10.0
    memory_only: bool = False
    tech: Optional[str] = None  # technology file, default from config

    def __post_init__(self):
        if not self.device.is_nvm:
            raise ScenarioError(f"device must be an MRAM flavor, got {self.device.value}")
        if self.ips_min <= 0:
            raise ScenarioError(f"ips_min must be positive, got {self.ips_min}")

    @property
    def key(self) -> str:
        """File-name friendly identifier"""
        label = 'sram' if self.variant is AssignmentVariant.SRAM_ONLY else \
            f"{self.variant.name.lower()}-{self.device.value.lower()}"
        return f"{Path(self.workload).stem}_{Path(self.arch).stem}_{label}_{self.node}nm"

    def library(self) -> TechLibrary:
        return load_tech_library(self.tech) if self.tech else default_library()

    def assignment(self, arch: ArchitectureSpec) -> MemoryAssignment:
        return MemoryAssignment.build(arch, self.variant, self.device)


@dataclass(frozen=True)
class ScenarioReport:
    scenario: Scenario
    network: str
    arch: ArchitectureSpec
    profile: NetworkProfile = field(hash=False)
    energy: EnergyBreakdown = field(hash=False)
    latency: LatencyEstimate = field(hash=False)
    area: AreaEstimate = field(hash=False)
    area_baseline: AreaEstimate = field(hash=False)
    duty: Optional[DutyCycleScenario] = field(hash=False)  # None when ips_min is out of reach
    curve: Optional[PowerCurve] = field(hash=False)
    metadata: Dict[str, str] = field(hash=False, default_factory=dict)

    @property
    def edp(self) -> float:
        return edp(self.energy, self.latency.latency)

    @property
    def label(self) -> str:
        return self.energy.label

    @property
    def area_savings(self) -> float:
        return self.area.savings_vs(self.area_baseline)

    def power_savings(self) -> Dict[str, float]:
        """1 - P_nvm/P_sram at ips_min for each compared NVM variant"""
        if self.duty is None:
            return {}
        return {label: savings_at(self.duty, label) for label in self.duty.nvm}


@dataclass
class SweepResult:
    reports: List[ScenarioReport] = field(default_factory=list)
    errors: List[Tuple[Scenario, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def arch_source(ref: str) -> str:
    """File an architecture reference was loaded from"""
    if ref in builtin_architectures() or ref.lower() in ALIASES:
        return str(config.data.arch_path)
    return ref


def scenario_metadata(scenario: Scenario, library: TechLibrary) -> Dict[str, str]:
    """Tool version plus SHA-256 of every input file"""
    return {
        'schema': str(config.data.schema_version),
        'version': __version__,
        'tech_sha256': library.sha256 or file_sha256(library.source),
        'arch_sha256': file_sha256(arch_source(scenario.arch)),
        'workload_sha256': file_sha256(network_path(scenario.workload)),
    }


def run_scenario(scenario: Scenario) -> ScenarioReport:
    """Map, then evaluate energy, latency, area and duty-cycled power"""
    try:
        library = scenario.library()
        library.check_node(scenario.node)
        network = load_network(network_path(scenario.workload))
        arch = get_architecture(scenario.arch)
        asg = scenario.assignment(arch)

        profile = map_network(network, arch)
        energy = inference_energy(profile.total, arch, asg, scenario.node, library)
        latency = inference_latency(profile.total, arch, asg, scenario.node, library)
        area = total_area(arch, asg, scenario.node, library, scenario.memory_only)
        baseline = total_area(arch, MemoryAssignment.build(arch, AssignmentVariant.SRAM_ONLY),
                              scenario.node, library, scenario.memory_only)
        variants = (AssignmentVariant.P0, AssignmentVariant.P1) \
            if scenario.variant is AssignmentVariant.SRAM_ONLY else (scenario.variant,)
        try:
            duty = build_scenario(profile.total, arch, scenario.node, devices=(scenario.device,),
                                  ips_min=scenario.ips_min, variants=variants, library=library)
            curve = power_curve(duty)
        except IpsRangeError as e:
            logger.warning(f"{scenario.key}: no duty-cycle analysis, {e}")
            duty = curve = None
        metadata = scenario_metadata(scenario, library)
    except MemdseError as e:
        raise ScenarioError(f"{scenario.key}: {e.qualified()}") from e

    logger.info(f"{scenario.key}: {energy.grand_total * 1e-6:.4g} uJ, "
                f"{latency.latency_ms:.4g} ms, {area.total:.3f} mm2")
    return ScenarioReport(
        scenario=scenario, network=network.name, arch=arch, profile=profile, energy=energy,
        latency=latency, area=area, area_baseline=baseline, duty=duty, curve=curve,
        metadata=metadata,
    )


def sweep_grid(base: Scenario,
               variants: Sequence[AssignmentVariant] = tuple(AssignmentVariant),
               devices: Sequence[DeviceKind] = (DeviceKind.VGSOT,),
               nodes: Sequence[int] = (28, 7)) -> List[Scenario]:
    """Grid order: node, device, variant; SramOnly appears once per node"""
    points = []
    for node, device, variant in product(nodes, devices, variants):
        if variant is AssignmentVariant.SRAM_ONLY and device is not devices[0]:
            continue
        points.append(replace(base, node=node, device=device, variant=variant))
    if not points:
        raise ScenarioError("sweep grid is empty")
    return points


def _raised_in(e: BaseException) -> str:
    """Module of the innermost frame of an exception"""
    tb = e.__traceback__
    if tb is None:
        return type(e).__module__
    while tb.tb_next is not None:
        tb = tb.tb_next
    return tb.tb_frame.f_globals.get('__name__', type(e).__module__)


def _run_point(scenario: Scenario) -> Tuple[Optional[ScenarioReport], Optional[str]]:
    try:
        return run_scenario(scenario), None
    except MemdseError as e:
        return None, str(e)
    except Exception as e:
        logger.debug(f"{scenario.key}: unexpected failure", exc_info=True)
        return None, f"{scenario.key}: [{_raised_in(e)}] {type(e).__name__}: {e}"


def run_sweep(points: Sequence[Scenario], n_jobs: Optional[int] = None) -> SweepResult:
    """Evaluate points in parallel; results keep grid order, failures are collected"""
    if not points:
        raise ScenarioError("sweep grid is empty")
    n_jobs = n_jobs or config.sweep.max_workers
    logger.info(f"Running {len(points)} scenarios on {n_jobs} workers")
    outcomes = Parallel(n_jobs=n_jobs)(delayed(_run_point)(p) for p in points)

    result = SweepResult()
    for point, (report, error) in zip(points, outcomes):
        if error is not None:
            logger.error(f"Scenario {point.key} failed: {error}")
            result.errors.append((point, error))
        else:
            result.reports.append(report)
    return result
