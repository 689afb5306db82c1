"""
Network file loading (JSON, schema 1)
"""
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..config import config
from ..errors import MemdseError, WorkloadParseError, WorkloadValidationError
from .model import LayerKind, LayerSpec, NetworkDescriptor

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _resolve_padding(pad: Any, kernel: int, index: int) -> int:
    """'same' -> (k-1)//2, 'valid' -> 0, integers pass through"""
    if isinstance(pad, str):
        if pad.lower() == 'same':
            return (kernel - 1) // 2
        if pad.lower() == 'valid':
            return 0
        raise WorkloadValidationError(f"unknown padding '{pad}'", index)
    if isinstance(pad, int) and pad >= 0:
        return pad
    raise WorkloadValidationError(f"invalid padding {pad!r}", index)


def _fc_input(entry: Dict[str, Any], index: int, in_c: int, in_h: int, in_w: int):
    """(in_channels, pooled_positions) of a FullyConnected layer over an HxW input

    `"pool": "global"` averages each channel over HxW first; otherwise the input
    is flattened to C*H*W features. An explicit `c` is taken as the flat length.
    """
    pool = str(entry.get('pool', 'flatten')).lower()
    if pool == 'global':
        return in_c, in_h * in_w
    if pool != 'flatten':
        raise WorkloadValidationError(f"unknown pool '{entry['pool']}'", index)
    if 'c' in entry:
        return in_c, 1
    return in_c * in_h * in_w, 1


def _layer_from_dict(entry: Dict[str, Any], index: int, in_c: int, in_h: int, in_w: int,
                     default_bits: int) -> LayerSpec:
    try:
        kind = LayerKind.parse(entry['kind'])
    except (KeyError, ValueError) as e:
        raise WorkloadValidationError(f"bad or missing kind: {e}", index) from e

    pooled = 1
    if kind is LayerKind.FULLY_CONNECTED:
        in_c, pooled = _fc_input(entry, index, in_c, in_h, in_w)
        r = s = stride = 1
        pad = 0
        in_h = in_w = 1
    else:
        default_k = 1 if kind is LayerKind.POINTWISE else 3
        r = entry.get('r', default_k)
        s = entry.get('s', r)
        stride = entry.get('stride', 1)
        if not isinstance(r, int):
            raise WorkloadValidationError(f"kernel 'r' must be an integer (got {r!r})", index)
        pad = _resolve_padding(entry.get('pad', 'same'), r, index)

    m = entry.get('m', in_c if kind is LayerKind.DEPTHWISE else None)
    if m is None:
        raise WorkloadValidationError("missing output channels 'm'", index)

    try:
        return LayerSpec(
            kind=kind, in_channels=in_c, out_channels=m, in_h=in_h, in_w=in_w,
            kernel_r=r, kernel_s=s, stride=stride, padding=pad,
            weight_bits=entry.get('weight_bits', default_bits),
            activation_bits=entry.get('act_bits', default_bits),
            name=entry.get('name', f"{kind.value.lower()}_{index}"),
            pooled_positions=pooled,
        )
    except WorkloadValidationError as e:
        raise WorkloadValidationError(str(e), index) from e


def _input_shape(net_in: Any) -> Tuple[int, int, int]:
    if not isinstance(net_in, dict):
        raise WorkloadParseError(f"'input' must be an object, got {type(net_in).__name__}")
    missing = [key for key in ('c', 'h', 'w') if key not in net_in]
    if missing:
        raise WorkloadParseError(f"'input' is missing field(s) {', '.join(missing)}")
    return net_in['c'], net_in['h'], net_in['w']


def _source(entry: Dict[str, Any], index: int) -> Optional[int]:
    """Producer index of a layer entry, None for the network input"""
    src = entry.get('from', index - 1 if index > 0 else -1)
    if src is None:
        return None
    if not isinstance(src, int) or isinstance(src, bool):
        raise WorkloadParseError(f"'from' must be a layer index (got {src!r})", index)
    if src >= index:
        raise WorkloadValidationError(f"'from' must reference an earlier layer (got {src})", index)
    return src if src >= 0 else None


def network_from_dict(data: Dict[str, Any]) -> NetworkDescriptor:
    """Build and validate a NetworkDescriptor from parsed JSON"""
    if not isinstance(data, dict):
        raise WorkloadParseError(f"network file must hold an object, got {type(data).__name__}")
    if data.get('schema') != SCHEMA_VERSION:
        raise WorkloadParseError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_VERSION}")
    try:
        name = data['name']
        net_in = data['input']
        entries = data['layers']
    except KeyError as e:
        raise WorkloadParseError(f"missing top-level field {e}") from e
    if not isinstance(entries, list) or not entries:
        raise WorkloadValidationError(f"network '{name}' has no layers")

    in_c, in_h, in_w = _input_shape(net_in)
    default_bits = net_in.get('bits', 8)
    layers: List[LayerSpec] = []
    sources: List[Optional[int]] = []
    explicit: List[bool] = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise WorkloadParseError(f"expected an object, got {type(entry).__name__}", i)
        src = _source(entry, i)
        if src is None:
            c, h, w = in_c, in_h, in_w
        else:
            producer = layers[src]
            c, h, w = producer.out_channels, producer.out_h, producer.out_w
        has_override = any(key in entry for key in ('c', 'h', 'w'))
        c = entry.get('c', c)
        h = entry.get('h', h)
        w = entry.get('w', w)
        try:
            layers.append(_layer_from_dict(entry, i, c, h, w, default_bits))
        except MemdseError:
            raise
        except (TypeError, ValueError) as e:
            raise WorkloadParseError(f"malformed field: {e}", i) from e
        sources.append(src)
        explicit.append(has_override)

    return NetworkDescriptor(
        name=name, layers=tuple(layers), sources=tuple(sources),
        explicit_inputs=tuple(explicit), chained=True,
        metadata=dict(data.get('metadata', {})),
    )


def load_network(path: Any) -> NetworkDescriptor:
    """Load a network description file"""
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise WorkloadParseError(f"{path}: malformed JSON: {e}") from e
    except UnicodeDecodeError as e:
        raise WorkloadParseError(f"{path}: not UTF-8 text: {e}") from e
    except OSError as e:
        raise WorkloadParseError(f"{path}: {e}") from e

    network = network_from_dict(data)
    if network.metadata.get('approximate'):
        logger.debug(f"Network '{network.name}' is an approximate layer list")
    logger.info(f"Loaded network '{network.name}': {len(network.layers)} layers, "
                f"{network.total_macs} MACs, {network.weight_bytes} weight bytes")
    return network


def bundled_network_names() -> List[str]:
    return sorted(p.stem for p in Path(config.data.network_dir).glob('*.json'))


def network_path(name: str) -> Path:
    """Path of a bundled network by name, or `name` itself if it is an existing file"""
    if os.path.exists(name):
        return Path(name)
    path = Path(config.data.network_dir) / f"{name}.json"
    if not path.exists():
        raise WorkloadParseError(
            f"unknown workload '{name}' (bundled: {', '.join(bundled_network_names())})")
    return path


def bundled_network(name: str) -> NetworkDescriptor:
    """Load a bundled network by name, or a path if one is given"""
    return load_network(network_path(name))
