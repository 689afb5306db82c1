"""
Area module: macro and PE-array silicon area per assignment
"""
from .model import (AreaEstimate, area_frame, area_summary, compare_areas, memory_area,
                    total_area)

__all__ = ['AreaEstimate', 'area_frame', 'area_summary', 'compare_areas', 'memory_area',
           'total_area']
