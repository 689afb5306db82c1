"""
Workload module: DNN layer shapes and network descriptors
"""
from .model import LayerKind, LayerSpec, NetworkDescriptor, TensorFootprint, mac_count, tensor_sizes
from .loader import (bundled_network, bundled_network_names, load_network, network_from_dict,
                     network_path)

__all__ = ['LayerKind', 'LayerSpec', 'NetworkDescriptor', 'TensorFootprint', 'mac_count',
           'tensor_sizes', 'load_network', 'bundled_network', 'bundled_network_names',
           'network_from_dict', 'network_path']
