"""
Technology module: memory devices, node scaling, MAC and PE costs
"""
from .devices import DeviceKind, MRAM_KINDS
from .library import (MacroScaling, MemDeviceParams, PeripheryBracket, TechLibrary,
                      default_library, library_from_dict, load_tech_library)

__all__ = ['DeviceKind', 'MRAM_KINDS', 'MacroScaling', 'MemDeviceParams', 'PeripheryBracket',
           'TechLibrary', 'default_library', 'library_from_dict', 'load_tech_library']
