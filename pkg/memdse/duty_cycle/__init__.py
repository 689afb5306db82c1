"""
Duty-cycle module: memory power versus inference rate, crossover and savings
"""
from .model import (BufferPower, Crossover, CrossoverStatus, DutyCycleScenario, PowerCurve,
                    VariantPower, crossover_frame, crossover_ips, curve_frame, ips_grid,
                    memory_power, power_curve, savings_at)
from .scenario import build_scenario, read_power, standby_power, wakeup_energy

__all__ = ['BufferPower', 'Crossover', 'CrossoverStatus', 'DutyCycleScenario', 'PowerCurve',
           'VariantPower', 'crossover_frame', 'crossover_ips', 'curve_frame', 'ips_grid',
           'memory_power', 'power_curve', 'savings_at', 'build_scenario', 'read_power',
           'standby_power', 'wakeup_energy']
