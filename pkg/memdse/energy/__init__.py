"""
Energy module: single-inference energy breakdown and EDP
"""
from .model import (EnergyBreakdown, LevelEnergy, breakdown_frame, compare_variants, edp,
                    inference_energy, summary_frame, variant_assignments)

__all__ = ['EnergyBreakdown', 'LevelEnergy', 'breakdown_frame', 'compare_variants', 'edp',
           'inference_energy', 'summary_frame', 'variant_assignments']
