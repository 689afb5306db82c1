"""
Technology library: per-device per-node memory parameters, MAC costs and node scaling

Entries in tech.json are either absolute ({"read_pj_bit": ...}) or relative to SRAM at
the same node ({"relative_to": "SRAM", "read_energy_ratio": ...}). A device/node pair
that has no entry is derived from the nearest node of the same device by walking the
scaling chain, which stores factors only between adjacent nodes.
"""
import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple, Union

from ..config import config
from ..errors import ScalingPathError, TechLibraryError
from ..utils import file_sha256
from .devices import DeviceKind

if TYPE_CHECKING:
    from ..arch.model import MemoryAssignment, MemoryLevel

logger = logging.getLogger(__name__)

SCALING_AXES = ('energy', 'latency', 'area')


@dataclass(frozen=True)
class MemDeviceParams:
    """Electrical/geometric parameters of one device at one node"""
    read_energy: float  # pJ/bit
    write_energy: float  # pJ/bit
    read_latency: float  # ns
    write_latency: float  # ns
    standby_ratio: float  # standby current / read current
    wakeup_time: float  # us
    bitcell_area: float  # F^2
    wakeup_energy: Optional[float] = None  # pJ per wake per instance; None = standby-equivalent

    def __post_init__(self):
        for name in ('read_energy', 'write_energy', 'read_latency', 'write_latency',
                     'standby_ratio', 'wakeup_time', 'bitcell_area'):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise TechLibraryError(f"{name} must be positive, got {value}")
        if self.standby_ratio > 1:
            raise TechLibraryError(f"standby_ratio must be <= 1, got {self.standby_ratio}")
        if self.wakeup_energy is not None and self.wakeup_energy < 0:
            raise TechLibraryError("wakeup_energy must be >= 0")

    @property
    def access_latency(self) -> float:
        """Slowest transaction, ns"""
        return max(self.read_latency, self.write_latency)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MemDeviceParams':
        try:
            return cls(
                read_energy=float(data['read_pj_bit']),
                write_energy=float(data['write_pj_bit']),
                read_latency=float(data['read_latency_ns']),
                write_latency=float(data['write_latency_ns']),
                standby_ratio=float(data['standby_ratio']),
                wakeup_time=float(data['wakeup_time_us']),
                bitcell_area=float(data['bitcell_f2']),
                wakeup_energy=data.get('wakeup_pj'),
            )
        except KeyError as e:
            raise TechLibraryError(f"device entry missing field {e}") from e


@dataclass(frozen=True)
class MacroScaling:
    """Per-bit access cost of a macro relative to a reference capacity.

    Bitline and wordline length grow with macro size, so a 512 B scratchpad is
    cheaper per bit than a 1 MB buffer built from the same cell. Exponent 0
    disables the adjustment.
    """
    ref_bytes: int = 8192
    energy_exponent: float = 0.0
    latency_exponent: float = 0.0

    def __post_init__(self):
        if self.ref_bytes <= 0:
            raise TechLibraryError("macro_scaling.ref_bytes must be positive")

    def energy_factor(self, capacity_bytes: int) -> float:
        return (capacity_bytes / self.ref_bytes) ** self.energy_exponent

    def latency_factor(self, capacity_bytes: int) -> float:
        return (capacity_bytes / self.ref_bytes) ** self.latency_exponent


@dataclass(frozen=True)
class PeripheryBracket:
    """Cascaded periphery overheads for macros up to max_bytes"""
    max_bytes: Optional[int]
    subarray: float
    mat: float
    bank: float

    @property
    def factor(self) -> float:
        return self.subarray * self.mat * self.bank


@dataclass(frozen=True)
class TechLibrary:
    """Immutable after load"""
    nodes: Tuple[int, ...]  # ordered largest -> smallest
    entries: Dict[Tuple[DeviceKind, int], Dict[str, Any]] = field(hash=False)
    steps: Dict[Tuple[int, int], Dict[str, float]] = field(hash=False)  # adjacent pairs only
    mac_pj: Dict[int, float] = field(hash=False)  # precision -> pJ at mac_node
    mac_node: int = 40
    pe_area_um2: float = 15000.0
    pe_area_node: int = 40
    cell_ratios: Dict[DeviceKind, float] = field(hash=False, default_factory=dict)
    periphery: Tuple[PeripheryBracket, ...] = ()
    macro: MacroScaling = MacroScaling()
    source: str = ""
    sha256: str = ""

    # --- scaling -------------------------------------------------------------

    def _index(self, node: int) -> int:
        try:
            return self.nodes.index(int(node))
        except ValueError:
            raise TechLibraryError(
                f"node {node} nm not in technology library (nodes: {', '.join(map(str, self.nodes))})"
            ) from None

    def check_node(self, node: int) -> int:
        self._index(node)
        return int(node)

    def factor(self, axis: str, node_from: int, node_to: int) -> float:
        """Product of adjacent-step factors along the ladder; inverse when scaling up"""
        if axis not in SCALING_AXES:
            raise TechLibraryError(f"unknown scaling axis '{axis}'")
        i, j = self._index(node_from), self._index(node_to)
        lo, hi = min(i, j), max(i, j)
        product = 1.0
        for k in range(lo, hi):
            step = self.steps.get((self.nodes[k], self.nodes[k + 1]))
            if step is None:
                raise ScalingPathError(
                    f"no scaling entry {self.nodes[k]}->{self.nodes[k + 1]} nm "
                    f"on path {node_from}->{node_to} nm")
            product *= step[axis]
        return product if i <= j else 1.0 / product

    def scale_energy(self, e: float, node_from: int, node_to: int) -> float:
        return e * self.factor('energy', node_from, node_to)

    def scale_latency(self, t: float, node_from: int, node_to: int) -> float:
        return t * self.factor('latency', node_from, node_to)

    def scale_area(self, a: float, node_from: int, node_to: int) -> float:
        return a * self.factor('area', node_from, node_to)

    # --- device parameters ---------------------------------------------------

    def bitcell_ratio(self, device: DeviceKind) -> float:
        """Cell area relative to high-density SRAM"""
        return self.cell_ratios.get(device, 1.0)

    def params(self, device: DeviceKind, node: int) -> MemDeviceParams:
        """Parameters of `device` at `node`, scaled from the nearest entry if needed"""
        node = int(node)
        self._index(node)
        entry = self.entries.get((device, node))
        if entry is not None:
            return self._from_entry(device, node, entry)

        available = [n for (d, n) in self.entries if d is device]
        if not available:
            raise TechLibraryError(f"no {device.value} entry in technology library")
        here = self._index(node)
        # nearest on the ladder; ties go to the larger node
        src = min(available, key=lambda n: (abs(self._index(n) - here), -n))
        base = self._from_entry(device, src, self.entries[(device, src)])
        logger.debug(f"Scaling {device.value} parameters {src}->{node} nm")
        return self._scaled(base, src, node)

    def _from_entry(self, device: DeviceKind, node: int, entry: Dict[str, Any]) -> MemDeviceParams:
        ref = entry.get('relative_to')
        if ref is None:
            return MemDeviceParams.from_dict(entry)

        ref_kind = DeviceKind.parse(ref)
        if ref_kind is device:
            raise TechLibraryError(f"{device.value}@{node}: entry relative to itself")
        base = self.params(ref_kind, node)
        return MemDeviceParams(
            read_energy=base.read_energy * float(entry.get('read_energy_ratio', 1.0)),
            write_energy=base.write_energy * float(entry.get('write_energy_ratio', 1.0)),
            read_latency=float(entry.get('read_latency_ns', base.read_latency)),
            write_latency=float(entry.get('write_latency_ns', base.write_latency)),
            standby_ratio=float(entry.get('standby_ratio', base.standby_ratio)),
            wakeup_time=float(entry.get('wakeup_time_us', base.wakeup_time)),
            bitcell_area=base.bitcell_area * self.bitcell_ratio(device) / self.bitcell_ratio(ref_kind),
            wakeup_energy=entry.get('wakeup_pj'),
        )

    def _scaled(self, p: MemDeviceParams, node_from: int, node_to: int) -> MemDeviceParams:
        e = self.factor('energy', node_from, node_to)
        t = self.factor('latency', node_from, node_to)
        a = self.factor('area', node_from, node_to)
        # bitcell area is in F^2, so divide out the feature-size change
        f2 = (node_from / node_to) ** 2
        return replace(
            p,
            read_energy=p.read_energy * e,
            write_energy=p.write_energy * e,
            read_latency=p.read_latency * t,
            write_latency=p.write_latency * t,
            bitcell_area=p.bitcell_area * a * f2,
            wakeup_energy=None if p.wakeup_energy is None else p.wakeup_energy * e,
        )

    def resolve(self, level: 'MemoryLevel', asg: 'MemoryAssignment', node: int) -> MemDeviceParams:
        """Parameters of the device bound to the level's slot, at `node`, sized to the level"""
        p = self.params(asg.device(level.technology_slot), node)
        k = self.macro.energy_factor(level.capacity)
        t = self.macro.latency_factor(level.capacity)
        if k == 1.0 and t == 1.0:
            return p
        return replace(
            p,
            read_energy=p.read_energy * k,
            write_energy=p.write_energy * k,
            read_latency=p.read_latency * t,
            write_latency=p.write_latency * t,
        )

    def cell_area_um2(self, device: DeviceKind, node: int) -> float:
        """Physical area of one bitcell"""
        return self.params(device, node).bitcell_area * (node / 1000.0) ** 2

    # --- compute -------------------------------------------------------------

    def mac_energy(self, node: int, precision: int) -> float:
        """pJ per MAC"""
        if precision not in self.mac_pj:
            raise TechLibraryError(
                f"no MAC energy for {precision}-bit precision "
                f"(available: {', '.join(map(str, sorted(self.mac_pj)))})")
        return self.scale_energy(self.mac_pj[precision], self.mac_node, node)

    def pe_area(self, node: int) -> float:
        """um^2 per PE"""
        return self.scale_area(self.pe_area_um2, self.pe_area_node, node)

    def periphery_bracket(self, capacity_bytes: int) -> PeripheryBracket:
        for bracket in self.periphery:
            if bracket.max_bytes is None or capacity_bytes <= bracket.max_bytes:
                return bracket
        raise TechLibraryError(f"no periphery bracket covers {capacity_bytes} bytes")

    # --- overrides used by what-if scenarios -----------------------------------

    def with_params(self, device: DeviceKind, node: int, params: MemDeviceParams) -> 'TechLibrary':
        entries = dict(self.entries)
        entries[(device, int(node))] = _params_to_entry(params)
        return replace(self, entries=entries)

    def with_macro_scaling(self, macro: MacroScaling) -> 'TechLibrary':
        return replace(self, macro=macro)

    def with_bitcell_ratio(self, device: DeviceKind, ratio: float) -> 'TechLibrary':
        ratios = dict(self.cell_ratios)
        ratios[device] = ratio
        return replace(self, cell_ratios=ratios)

    def validate(self) -> List[str]:
        """Resolve every device on every node; returns warnings"""
        warnings = []
        for device in DeviceKind:
            if not any(d is device for d, _ in self.entries):
                warnings.append(f"{device.value} has no entries")
                continue
            for node in self.nodes:
                self.params(device, node)
        for k in range(len(self.nodes) - 1):
            if (self.nodes[k], self.nodes[k + 1]) not in self.steps:
                warnings.append(f"missing scaling step {self.nodes[k]}->{self.nodes[k + 1]} nm")
        return warnings


def _params_to_entry(p: MemDeviceParams) -> Dict[str, Any]:
    entry = {
        'read_pj_bit': p.read_energy,
        'write_pj_bit': p.write_energy,
        'read_latency_ns': p.read_latency,
        'write_latency_ns': p.write_latency,
        'standby_ratio': p.standby_ratio,
        'wakeup_time_us': p.wakeup_time,
        'bitcell_f2': p.bitcell_area,
    }
    if p.wakeup_energy is not None:
        entry['wakeup_pj'] = p.wakeup_energy
    return entry


def library_from_dict(data: Dict[str, Any], source: str = "", sha256: str = "") -> TechLibrary:
    if data.get('schema') != config.data.schema_version:
        raise TechLibraryError(f"unsupported technology schema {data.get('schema')}")
    try:
        nodes = tuple(sorted((int(n) for n in data['nodes']), reverse=True))
        entries = {}
        for kind, per_node in data['devices'].items():
            device = DeviceKind.parse(kind)
            for node, entry in per_node.items():
                entries[(device, int(node))] = entry

        steps = {}
        for step in data['scaling']:
            pair = (int(step['from']), int(step['to']))
            factors = {axis: float(step[axis]) for axis in SCALING_AXES}
            if any(v <= 0 for v in factors.values()):
                raise TechLibraryError(f"scaling {pair[0]}->{pair[1]} nm: factors must be positive")
            steps[pair] = factors

        mac = data['mac']
        pe = data['pe_area']
        periphery = tuple(
            PeripheryBracket(max_bytes=b.get('max_bytes'), subarray=float(b['subarray']),
                             mat=float(b['mat']), bank=float(b['bank']))
            for b in data['periphery'])
        ratios = {DeviceKind.parse(k): 1.0 / float(v)
                  for k, v in data.get('bitcell_reduction', {}).items()}
        ms = data.get('macro_scaling', {})
        macro = MacroScaling(ref_bytes=int(ms.get('ref_bytes', 8192)),
                             energy_exponent=float(ms.get('energy_exponent', 0.0)),
                             latency_exponent=float(ms.get('latency_exponent', 0.0)))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, TechLibraryError):
            raise
        raise TechLibraryError(f"malformed technology library: {e}") from e

    return TechLibrary(
        nodes=nodes, entries=entries, steps=steps,
        mac_pj={int(k): float(v) for k, v in mac['pj'].items()}, mac_node=int(mac['node']),
        pe_area_um2=float(pe['um2']), pe_area_node=int(pe['node']),
        cell_ratios=ratios, periphery=periphery, macro=macro, source=source, sha256=sha256,
    )


_cache: Dict[str, TechLibrary] = {}


def load_tech_library(path: Optional[Union[str, Path]] = None) -> TechLibrary:
    """Load tech.json (MEMDSE_TECH overrides the bundled file)"""
    path = str(path or config.data.tech_path)
    if path in _cache:
        return _cache[path]
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise TechLibraryError(f"cannot read technology file {path}: {e}") from e

    library = library_from_dict(data, source=path, sha256=file_sha256(path))
    for warning in library.validate():
        logger.warning(f"Technology library {path}: {warning}")
    logger.info(f"Loaded technology library {path} ({len(library.entries)} device entries)")
    _cache[path] = library
    return library


def default_library() -> TechLibrary:
    return load_tech_library()
