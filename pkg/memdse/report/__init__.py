"""
Report module: scenarios, parallel sweeps, summary tables and writers
"""
from .scenario import (Scenario, ScenarioReport, SweepResult, run_scenario, run_sweep,
                       scenario_metadata, sweep_grid)
from .tables import (area_table, crossover_table, curve_table, energy_table,
                     latency_savings_table, level_table)
from .writer import header_line, merge_metadata, render, write_table

__all__ = ['Scenario', 'ScenarioReport', 'SweepResult', 'run_scenario', 'run_sweep',
           'scenario_metadata', 'sweep_grid', 'area_table', 'crossover_table', 'curve_table',
           'energy_table', 'latency_savings_table', 'level_table', 'header_line',
           'merge_metadata', 'render', 'write_table']
