"""
Memory power versus inference rate with power gating

Every curve is affine in ips on [0, ips_max]:
  retained (SRAM) buffer:  P = ips*E + P_standby*(1 - ips*t_active)
  gated (NVM) buffer:      P = ips*(E + E_wakeup)
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import config
from ..errors import IpsRangeError

logger = logging.getLogger(__name__)

COMPONENTS = ('total', 'weight', 'io')
_RANGE_SLACK = 1e-12


@dataclass(frozen=True)
class BufferPower:
    """One memory level's contribution; energies in J, powers in W"""
    name: str
    component: str  # 'weight' or 'io'
    energy: float
    standby: float = 0.0
    wakeup_energy: float = 0.0
    gated: bool = False

    def coefficients(self, active_time: float) -> Tuple[float, float]:
        """(slope W per ips, intercept W)"""
        if self.gated:
            return self.energy + self.wakeup_energy, 0.0
        return self.energy - self.standby * active_time, self.standby


@dataclass(frozen=True)
class VariantPower:
    label: str
    buffers: Tuple[BufferPower, ...]
    active_time: float  # s per inference
    wakeup_time: float  # s per wake

    def __post_init__(self):
        if self.active_time <= 0 or self.wakeup_time < 0:
            raise IpsRangeError(f"{self.label}: active time must be positive")

    @property
    def ips_max(self) -> float:
        return 1.0 / (self.active_time + self.wakeup_time)

    def line(self, component: str = 'total') -> Tuple[float, float]:
        if component not in COMPONENTS:
            raise ValueError(f"unknown component '{component}'")
        slope = intercept = 0.0
        for b in self.buffers:
            if component == 'total' or b.component == component:
                a, c = b.coefficients(self.active_time)
                slope += a
                intercept += c
        return slope, intercept

    @property
    def standby_power(self) -> float:
        return self.line()[1]

    @property
    def energy_per_inference(self) -> float:
        return sum(b.energy for b in self.buffers)


@dataclass(frozen=True)
class DutyCycleScenario:
    """SRAM baseline plus the NVM variants compared against it"""
    sram: VariantPower
    nvm: Dict[str, VariantPower] = field(hash=False)
    ips_min: float = 10.0

    def __post_init__(self):
        if not 0 < self.ips_min:
            raise IpsRangeError(f"ips_min must be positive, got {self.ips_min}")
        for v in (self.sram, *self.nvm.values()):
            if self.ips_min > v.ips_max * (1 + _RANGE_SLACK):
                raise IpsRangeError(
                    f"ips_min {self.ips_min:g} exceeds {v.label} ips_max {v.ips_max:.6g}")

    def variant(self, label: str) -> VariantPower:
        if label == self.sram.label:
            return self.sram
        try:
            return self.nvm[label]
        except KeyError:
            raise IpsRangeError(f"no variant '{label}' in scenario") from None

    @property
    def labels(self) -> List[str]:
        return [self.sram.label] + list(self.nvm)


class CrossoverStatus(Enum):
    CROSSES = "crosses"
    CAPPED = "capped"
    NONE = "none"
    EQUAL = "equal"


@dataclass(frozen=True)
class Crossover:
    status: CrossoverStatus
    ips: Optional[float] = None  # None unless CROSSES or CAPPED
    nvm_better_below: bool = True  # which side of the crossing NVM wins

    @property
    def capped(self) -> bool:
        return self.status is CrossoverStatus.CAPPED


@dataclass(frozen=True)
class PowerCurve:
    """Sampled curves per variant and component, with crossovers per NVM variant"""
    ips: np.ndarray = field(hash=False)
    watts: Dict[Tuple[str, str], np.ndarray] = field(hash=False)
    crossovers: Dict[str, Crossover] = field(hash=False)


def _check_range(v: VariantPower, ips: float) -> None:
    if ips < 0 or ips > v.ips_max * (1 + _RANGE_SLACK):
        raise IpsRangeError(f"{v.label}: ips {ips} outside [0, {v.ips_max:.6g}]")


def memory_power(scenario: DutyCycleScenario, variant: str, ips: float,
                 component: str = 'total') -> float:
    """Average memory power in W at the given inference rate"""
    v = scenario.variant(variant)
    _check_range(v, ips)
    slope, intercept = v.line(component)
    return max(0.0, slope * ips + intercept)


def crossover_ips(scenario: DutyCycleScenario, nvm_variant: str,
                  component: str = 'total') -> Crossover:
    """Intersection of the SRAM and NVM lines, clamped to the lower ips_max"""
    nvm = scenario.variant(nvm_variant)
    a_s, b_s = scenario.sram.line(component)
    a_n, b_n = nvm.line(component)
    limit = min(scenario.sram.ips_max, nvm.ips_max)

    if math.isclose(a_s, a_n, rel_tol=1e-12, abs_tol=0.0):
        if math.isclose(b_s, b_n, rel_tol=1e-12, abs_tol=0.0):
            return Crossover(CrossoverStatus.EQUAL)
        return Crossover(CrossoverStatus.NONE, nvm_better_below=b_n < b_s)

    x = (b_n - b_s) / (a_s - a_n)
    better_below = b_n < b_s if b_n != b_s else a_n < a_s
    if x <= 0:
        return Crossover(CrossoverStatus.NONE, nvm_better_below=better_below)
    if x > limit:
        return Crossover(CrossoverStatus.CAPPED, ips=limit, nvm_better_below=better_below)
    return Crossover(CrossoverStatus.CROSSES, ips=x, nvm_better_below=better_below)


def savings_at(scenario: DutyCycleScenario, nvm_variant: str, ips_min: Optional[float] = None,
               component: str = 'total') -> float:
    """1 - P_nvm / P_sram at ips_min; negative when NVM costs more"""
    ips = scenario.ips_min if ips_min is None else ips_min
    p_sram = memory_power(scenario, scenario.sram.label, ips, component)
    p_nvm = memory_power(scenario, nvm_variant, ips, component)
    if p_sram == 0:
        raise IpsRangeError(f"SRAM memory power is zero at {ips} ips")
    return 1.0 - p_nvm / p_sram


def ips_grid(low: Optional[float] = None, high: Optional[float] = None,
             per_decade: Optional[int] = None) -> np.ndarray:
    """Logarithmic ips grid, inclusive of both ends"""
    low = low or config.sweep.ips_low
    high = high or config.sweep.ips_high
    per_decade = per_decade or config.sweep.points_per_decade
    decades = math.log10(high) - math.log10(low)
    n = int(round(decades * per_decade)) + 1
    return np.logspace(math.log10(low), math.log10(high), n)


def power_curve(scenario: DutyCycleScenario, grid: Optional[np.ndarray] = None) -> PowerCurve:
    """Sample every variant/component on the grid; points above a variant's ips_max are NaN"""
    grid = ips_grid() if grid is None else np.asarray(grid, dtype=float)
    watts = {}
    for label in scenario.labels:
        v = scenario.variant(label)
        in_range = grid <= v.ips_max * (1 + _RANGE_SLACK)
        for component in COMPONENTS:
            slope, intercept = v.line(component)
            watts[(label, component)] = np.where(
                in_range, np.maximum(0.0, slope * grid + intercept), np.nan)
    crossovers = {label: crossover_ips(scenario, label) for label in scenario.nvm}
    return PowerCurve(ips=grid, watts=watts, crossovers=crossovers)


def curve_frame(curve: PowerCurve, devices: Dict[str, str]) -> pd.DataFrame:
    """variant,device,ips,total_w,weight_w,io_w"""
    frames = []
    labels = sorted({label for label, _ in curve.watts}, key=list(devices).index)
    for label in labels:
        frames.append(pd.DataFrame({
            'variant': label,
            'device': devices[label],
            'ips': curve.ips,
            'total_w': curve.watts[(label, 'total')],
            'weight_w': curve.watts[(label, 'weight')],
            'io_w': curve.watts[(label, 'io')],
        }))
    return pd.concat(frames, ignore_index=True)


def crossover_frame(scenario: DutyCycleScenario, curve: PowerCurve) -> pd.DataFrame:
    rows = []
    for label, xo in curve.crossovers.items():
        rows.append({
            'variant': label,
            'status': xo.status.value,
            'crossover_ips': xo.ips if xo.ips is not None else float('nan'),
            'nvm_better_below': xo.nvm_better_below,
            'ips_max': min(scenario.sram.ips_max, scenario.variant(label).ips_max),
            'savings_at_ips_min': savings_at(scenario, label),
        })
    return pd.DataFrame(rows)
