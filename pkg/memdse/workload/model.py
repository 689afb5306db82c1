"""
Layer and network types with exact arithmetic/tensor-size quantities
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from ..errors import WorkloadValidationError
from ..utils import bytes_for

logger = logging.getLogger(__name__)


class LayerKind(Enum):
    """Layer kinds representable by the cost model"""
    CONV2D = "Conv2D"
    DEPTHWISE = "DepthwiseConv2D"
    POINTWISE = "PointwiseConv2D"
    FULLY_CONNECTED = "FullyConnected"

    @classmethod
    def parse(cls, value: str) -> 'LayerKind':
        for kind in cls:
            if kind.value.lower() == str(value).lower():
                return kind
        raise ValueError(f"unknown layer kind '{value}'")


@dataclass(frozen=True)
class LayerSpec:
    """One inference layer, batch size 1"""
    kind: LayerKind
    in_channels: int
    out_channels: int
    in_h: int = 1
    in_w: int = 1
    kernel_r: int = 1
    kernel_s: int = 1
    stride: int = 1
    padding: int = 0
    weight_bits: int = 8
    activation_bits: int = 8
    name: str = ""
    pooled_positions: int = 1  # FullyConnected over a global average pool of this many positions

    def __post_init__(self):
        self.validate()

    def validate(self, index: Optional[int] = None) -> None:
        for label, value in (('in_channels', self.in_channels), ('out_channels', self.out_channels),
                             ('in_h', self.in_h), ('in_w', self.in_w), ('kernel_r', self.kernel_r),
                             ('kernel_s', self.kernel_s), ('stride', self.stride),
                             ('weight_bits', self.weight_bits), ('activation_bits', self.activation_bits)):
            if not isinstance(value, int) or value < 1:
                raise WorkloadValidationError(f"{label} must be an integer >= 1 (got {value})", index)
        if not isinstance(self.padding, int) or self.padding < 0:
            raise WorkloadValidationError(f"padding must be >= 0 (got {self.padding})", index)
        if self.kind is LayerKind.DEPTHWISE and self.out_channels != self.in_channels:
            raise WorkloadValidationError(
                f"DepthwiseConv2D needs out_channels == in_channels "
                f"({self.out_channels} != {self.in_channels})", index)
        if self.kind is LayerKind.POINTWISE and (self.kernel_r, self.kernel_s) != (1, 1):
            raise WorkloadValidationError("PointwiseConv2D needs a 1x1 kernel", index)
        if not isinstance(self.pooled_positions, int) or self.pooled_positions < 1:
            raise WorkloadValidationError(
                f"pooled_positions must be an integer >= 1 (got {self.pooled_positions})", index)
        if self.pooled_positions > 1 and self.kind is not LayerKind.FULLY_CONNECTED:
            raise WorkloadValidationError("only FullyConnected layers take a pooled input", index)
        if self.kind is LayerKind.FULLY_CONNECTED and \
                (self.in_h, self.in_w, self.kernel_r, self.kernel_s, self.stride, self.padding) != (1, 1, 1, 1, 1, 0):
            raise WorkloadValidationError("FullyConnected takes a flat 1x1 input", index)
        if self.out_h < 1 or self.out_w < 1:
            raise WorkloadValidationError(
                f"output spatial size {self.out_h}x{self.out_w} is empty", index)

    @property
    def out_h(self) -> int:
        """P"""
        return (self.in_h + 2 * self.padding - self.kernel_r) // self.stride + 1

    @property
    def out_w(self) -> int:
        """Q"""
        return (self.in_w + 2 * self.padding - self.kernel_s) // self.stride + 1

    @property
    def reduction_channels(self) -> int:
        """Input channels contracted per output element"""
        return 1 if self.kind is LayerKind.DEPTHWISE else self.in_channels

    def input_channel(self, m: int, c: int) -> int:
        """Input channel read by output channel m at reduction index c"""
        return m if self.kind is LayerKind.DEPTHWISE else c

    def dims(self) -> Dict[str, int]:
        return {'C': self.in_channels, 'M': self.out_channels, 'H': self.in_h, 'W': self.in_w,
                'R': self.kernel_r, 'S': self.kernel_s, 'P': self.out_h, 'Q': self.out_w}


@dataclass(frozen=True)
class TensorFootprint:
    """Word and byte sizes of a layer's tensors"""
    weight_words: int
    input_words: int
    output_words: int
    weight_bits: int = 8
    activation_bits: int = 8

    @property
    def weight_bytes(self) -> int:
        return bytes_for(self.weight_words, self.weight_bits)

    @property
    def input_bytes(self) -> int:
        return bytes_for(self.input_words, self.activation_bits)

    @property
    def output_bytes(self) -> int:
        return bytes_for(self.output_words, self.activation_bits)


def mac_count(layer: LayerSpec) -> int:
    """Multiply-accumulate operations of one inference of the layer"""
    C, M, P, Q = layer.in_channels, layer.out_channels, layer.out_h, layer.out_w
    R, S = layer.kernel_r, layer.kernel_s
    if layer.kind is LayerKind.CONV2D:
        return C * M * P * Q * R * S
    if layer.kind is LayerKind.DEPTHWISE:
        return C * P * Q * R * S
    if layer.kind is LayerKind.POINTWISE:
        return C * M * P * Q
    return C * M


def tensor_sizes(layer: LayerSpec) -> TensorFootprint:
    C, M = layer.in_channels, layer.out_channels
    if layer.kind is LayerKind.DEPTHWISE:
        weights = C * layer.kernel_r * layer.kernel_s
    else:
        weights = C * M * layer.kernel_r * layer.kernel_s
    return TensorFootprint(
        weight_words=weights,
        input_words=C * layer.in_h * layer.in_w,
        output_words=M * layer.out_h * layer.out_w,
        weight_bits=layer.weight_bits,
        activation_bits=layer.activation_bits,
    )


@dataclass(frozen=True)
class NetworkDescriptor:
    """Ordered layers; `sources[i]` is the producer of layer i's input (None = network input)"""
    name: str
    layers: Tuple[LayerSpec, ...]
    sources: Tuple[Optional[int], ...] = ()
    explicit_inputs: Tuple[bool, ...] = ()
    chained: bool = True
    metadata: Dict[str, object] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if not self.layers:
            raise WorkloadValidationError(f"network '{self.name}' has no layers")
        if not self.sources:
            object.__setattr__(self, 'sources', tuple([None] + list(range(len(self.layers) - 1))))
        if not self.explicit_inputs:
            object.__setattr__(self, 'explicit_inputs', tuple(False for _ in self.layers))
        if len(self.sources) != len(self.layers) or len(self.explicit_inputs) != len(self.layers):
            raise WorkloadValidationError("sources/explicit_inputs must match the layer list")
        if self.chained:
            self._check_chaining()

    def _check_chaining(self) -> None:
        for i, (layer, src) in enumerate(zip(self.layers, self.sources)):
            if src is None or self.explicit_inputs[i]:
                continue
            if not 0 <= src < i:
                raise WorkloadValidationError(f"source {src} must be an earlier layer", i)
            producer = self.layers[src]
            expected = producer.out_channels
            if layer.kind is LayerKind.FULLY_CONNECTED:
                positions = producer.out_h * producer.out_w
                if layer.pooled_positions not in (1, positions):
                    raise WorkloadValidationError(
                        f"pools {layer.pooled_positions} positions, producer layer {src} "
                        f"has {positions}", i)
                expected *= positions // layer.pooled_positions
            if layer.in_channels != expected:
                raise WorkloadValidationError(
                    f"input channels {layer.in_channels} != {expected} "
                    f"from producer layer {src}", i)

    @classmethod
    def standalone(cls, name: str, layers: List[LayerSpec]) -> 'NetworkDescriptor':
        """Unchained collection for per-layer analysis"""
        return cls(name=name, layers=tuple(layers), sources=tuple(None for _ in layers), chained=False)

    @property
    def total_macs(self) -> int:
        return sum(mac_count(layer) for layer in self.layers)

    @property
    def weight_bytes(self) -> int:
        return sum(tensor_sizes(layer).weight_bytes for layer in self.layers)
