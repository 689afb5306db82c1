"""
Builtin architectures, loaded from the versioned architectures.json
"""
import json
import logging
from pathlib import Path
from typing import Dict, Optional, Union

from ..config import config
from ..errors import ArchitectureError
from .model import ArchitectureSpec, Dataflow

logger = logging.getLogger(__name__)

ALIASES = {'eyeriss': 'eyeriss-like', 'simba': 'simba-like'}

# PE array of the scaled-up variant of each array architecture
V2_ARRAY = (64, 64)
V2_SUFFIX = '-v2'

_cache: Dict[str, Dict[str, ArchitectureSpec]] = {}


def load_architectures(path: Optional[Union[str, Path]] = None) -> Dict[str, ArchitectureSpec]:
    """Parse an architectures file into name -> ArchitectureSpec"""
    path = Path(path or config.data.arch_path)
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ArchitectureError(f"cannot read architectures file {path}: {e}") from e

    if data.get('schema') != config.data.schema_version:
        raise ArchitectureError(f"{path}: unsupported schema {data.get('schema')}")

    archs: Dict[str, ArchitectureSpec] = {}
    for entry in data.get('architectures', []):
        arch = ArchitectureSpec.from_dict(entry)
        if arch.name in archs:
            raise ArchitectureError(f"{path}: duplicate architecture '{arch.name}'")
        archs[arch.name] = arch

    logger.debug(f"Loaded {len(archs)} architectures from {path}")
    return archs


def v2_name(name: str) -> str:
    """Name of the 64x64 variant: 'simba-like' -> 'simba-v2'"""
    base = name[:-len('-like')] if name.endswith('-like') else name
    return f"{base}{V2_SUFFIX}"


def is_v2(name: str) -> bool:
    return name.endswith(V2_SUFFIX)


def with_v2_variants(archs: Dict[str, ArchitectureSpec]) -> Dict[str, ArchitectureSpec]:
    """Add a 64x64 copy of every array architecture; the scalar core stays 1x1"""
    out = dict(archs)
    for arch in archs.values():
        if arch.dataflow is Dataflow.SEQUENTIAL_CPU or is_v2(arch.name):
            continue
        name = v2_name(arch.name)
        if name not in out:
            out[name] = arch.with_array(*V2_ARRAY, name=name)
    return out


def builtin_architectures() -> Dict[str, ArchitectureSpec]:
    key = str(config.data.arch_path)
    if key not in _cache:
        _cache[key] = with_v2_variants(load_architectures(key))
    return _cache[key]


def get_architecture(name_or_path: Union[str, Path]) -> ArchitectureSpec:
    """Look up a builtin by name or alias, or load a single-architecture JSON file"""
    name = str(name_or_path)
    archs = builtin_architectures()
    name = ALIASES.get(name.lower(), name)
    if name in archs:
        return archs[name]

    path = Path(name_or_path)
    if path.suffix == '.json' and path.exists():
        with open(path) as f:
            data = json.load(f)
        if 'architectures' in data:
            loaded = list(load_architectures(path).values())
            if not loaded:
                raise ArchitectureError(f"{path}: no architectures")
            return loaded[0]
        return ArchitectureSpec.from_dict(data)

    raise ArchitectureError(
        f"unknown architecture '{name_or_path}' (builtins: {', '.join(sorted(archs))})")


def dump_architectures(path: Union[str, Path]) -> Path:
    """Write the builtin architectures file for editing"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(config.data.arch_path) as f:
        data = json.load(f)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2)
        f.write('\n')
    logger.info(f"Wrote architectures to {path}")
    return path
