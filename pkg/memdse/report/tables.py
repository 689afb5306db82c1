"""
Summary tables assembled from scenario reports
"""
import math
from typing import Dict, List, Sequence, Tuple

import pandas as pd

from ..area.model import area_summary
from ..arch.model import AssignmentVariant
from ..duty_cycle.model import crossover_frame, crossover_ips, curve_frame
from .scenario import ScenarioReport


def _sram_totals(reports: Sequence[ScenarioReport]) -> Dict[Tuple[str, str, int], float]:
    return {(r.network, r.arch.name, r.scenario.node): r.energy.grand_total
            for r in reports if r.scenario.variant is AssignmentVariant.SRAM_ONLY}


def energy_table(reports: Sequence[ScenarioReport]) -> pd.DataFrame:
    """One row per scenario: energy split, latency and EDP"""
    base = _sram_totals(reports)
    rows = []
    for r in reports:
        e = r.energy
        ref = base.get((r.network, r.arch.name, r.scenario.node))
        rows.append({
            'workload': r.network,
            'arch': r.arch.name,
            'node_nm': r.scenario.node,
            'variant': r.label,
            'compute_pj': e.compute,
            'mem_read_pj': e.mem_read,
            'mem_write_pj': e.mem_write,
            'total_pj': e.grand_total,
            'read_write_ratio': e.read_write_ratio,
            'latency_ms': r.latency.latency_ms,
            'clock_mhz': r.latency.frequency_mhz,
            'bottleneck': r.latency.bottleneck,
            'edp_js': r.edp,
            'vs_sram': e.grand_total / ref - 1.0 if ref else math.nan,
        })
    return pd.DataFrame(rows)


def latency_savings_table(reports: Sequence[ScenarioReport]) -> pd.DataFrame:
    """Per workload/arch: P0 and P1 latency, memory power savings and crossover at ips_min"""
    rows = []
    for r in reports:
        if r.scenario.variant is not AssignmentVariant.SRAM_ONLY or r.duty is None:
            continue
        row = {'workload': r.network, 'arch': r.arch.name, 'node_nm': r.scenario.node,
               'device': r.scenario.device.value, 'ips_min': r.duty.ips_min,
               'latency_sram_ms': r.duty.sram.active_time * 1e3}
        savings = r.power_savings()
        for label, v in r.duty.nvm.items():
            variant = label.split('-', 1)[0].lower()
            xo = crossover_ips(r.duty, label)
            row[f'latency_{variant}_ms'] = v.active_time * 1e3
            row[f'savings_{variant}'] = savings[label]
            row[f'crossover_{variant}_ips'] = xo.ips if xo.ips is not None else math.nan
            row[f'crossover_{variant}_status'] = xo.status.value
        rows.append(row)
    return pd.DataFrame(rows)


def area_table(reports: Sequence[ScenarioReport]) -> pd.DataFrame:
    seen = set()
    estimates = []
    for r in reports:
        for est in (r.area_baseline, r.area):
            key = (est.arch_name, est.label, est.node)
            if key not in seen:
                seen.add(key)
                estimates.append(est)
    return area_summary(estimates)


def curve_table(report: ScenarioReport) -> pd.DataFrame:
    """Plot-ready memory power per variant and component over the ips grid"""
    devices = {report.duty.sram.label: 'SRAM'}
    devices.update({label: report.scenario.device.value for label in report.duty.nvm})
    return curve_frame(report.curve, devices)


def crossover_table(report: ScenarioReport) -> pd.DataFrame:
    df = crossover_frame(report.duty, report.curve)
    df.insert(0, 'arch', report.arch.name)
    df.insert(0, 'workload', report.network)
    return df


def level_table(report: ScenarioReport) -> pd.DataFrame:
    """Access counts and energy per level and datatype for one scenario"""
    frame = report.profile.total.to_frame()
    read_pj: List[float] = []
    write_pj: List[float] = []
    for level, dt in zip(frame['level'], frame['datatype']):
        le = next(v for (name, d), v in report.energy.levels.items()
                  if name == level and d.value == dt)
        read_pj.append(le.read)
        write_pj.append(le.write)
    frame['read_pj'] = read_pj
    frame['write_pj'] = write_pj
    frame['demand_words_per_cycle'] = [report.profile.total.bandwidth_demand.get(level, 0.0)
                                       for level in frame['level']]
    return frame
