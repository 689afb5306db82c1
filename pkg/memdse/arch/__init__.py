"""
Architecture module: PE arrays, dataflows and memory hierarchies
"""
from .model import (ArchitectureSpec, AssignmentVariant, DataType, Dataflow, MemoryAssignment,
                    MemoryLevel, Sharing, validate_assignment)
from .builtins import (builtin_architectures, dump_architectures, get_architecture, is_v2,
                       load_architectures, with_v2_variants)

__all__ = ['ArchitectureSpec', 'AssignmentVariant', 'DataType', 'Dataflow', 'MemoryAssignment',
           'MemoryLevel', 'Sharing', 'validate_assignment', 'builtin_architectures',
           'get_architecture', 'load_architectures', 'dump_architectures', 'is_v2',
           'with_v2_variants']
