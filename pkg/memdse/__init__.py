"""
memdse - memory-oriented design-space exploration for edge-AI accelerators
Energy, latency, area and duty-cycled memory power under SRAM/MRAM hierarchies
"""

__version__ = "1.0.0"
__author__ = "memdse Team"
