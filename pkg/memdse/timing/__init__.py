"""
Timing module: memory-limited clock and inference latency
"""
from .model import LatencyEstimate, inference_latency, scaled_base_frequency

__all__ = ['LatencyEstimate', 'inference_latency', 'scaled_base_frequency']
