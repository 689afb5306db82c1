"""
Mapper module: per-level access counts for a layer under a dataflow
"""
from .profile import AccessCount, AccessProfile
from .mapper import NetworkProfile, map_layer, map_network
from .oracle import oracle_map_layer

__all__ = ['AccessCount', 'AccessProfile', 'NetworkProfile', 'map_layer', 'map_network',
           'oracle_map_layer']
