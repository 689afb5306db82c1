"""
Accelerator organization: PE array, dataflow discipline, memory hierarchy
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from ..errors import ArchitectureError, AssignmentError
from ..technology.devices import DeviceKind

logger = logging.getLogger(__name__)


class DataType(Enum):
    WEIGHTS = "weights"
    INPUTS = "inputs"
    OUTPUTS = "outputs"


class Sharing(Enum):
    PER_PE = "PerPE"
    PER_ROW = "PerRow"
    GLOBAL = "Global"


class Dataflow(Enum):
    ROW_STATIONARY = "RowStationary"
    WEIGHT_STATIONARY = "WeightStationary"
    SEQUENTIAL_CPU = "SequentialCPU"


class AssignmentVariant(Enum):
    """SRAM-only baseline, NVM weights only (P0), NVM everywhere (P1)"""
    SRAM_ONLY = "sram"
    P0 = "p0"
    P1 = "p1"

    @classmethod
    def parse(cls, value: str) -> 'AssignmentVariant':
        aliases = {'sram': cls.SRAM_ONLY, 'sramonly': cls.SRAM_ONLY, 'sram_only': cls.SRAM_ONLY,
                   'p0': cls.P0, 'p1': cls.P1}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown variant '{value}' (choose from sram, p0, p1)") from None


def _enum(enum_cls, value):
    for member in enum_cls:
        if member.value.lower() == str(value).lower() or member.name.lower() == str(value).lower():
            return member
    raise ArchitectureError(f"unknown {enum_cls.__name__} '{value}'")


@dataclass(frozen=True)
class MemoryLevel:
    """One buffer level; capacity and bandwidth are per instance"""
    name: str
    held_data: FrozenSet[DataType]
    capacity: int  # bytes
    word_width: int  # bits
    sharing: Sharing
    max_bandwidth: int  # words/cycle
    technology_slot: str
    top: bool = False

    def __post_init__(self):
        if self.capacity * 8 < self.word_width:
            raise ArchitectureError(f"level '{self.name}': capacity below one word")
        if self.max_bandwidth < 1:
            raise ArchitectureError(f"level '{self.name}': max_bandwidth must be >= 1")
        if not self.held_data:
            raise ArchitectureError(f"level '{self.name}' holds no data")

    @property
    def words(self) -> int:
        return self.capacity * 8 // self.word_width

    def holds(self, dt: DataType) -> bool:
        return dt in self.held_data

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'held': sorted(d.value for d in self.held_data),
            'capacity_bytes': self.capacity,
            'word_width': self.word_width,
            'sharing': self.sharing.value,
            'max_bandwidth': self.max_bandwidth,
            'slot': self.technology_slot,
            'top': self.top,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'MemoryLevel':
        try:
            return cls(
                name=data['name'],
                held_data=frozenset(_enum(DataType, d) for d in data['held']),
                capacity=int(data['capacity_bytes']),
                word_width=int(data['word_width']),
                sharing=_enum(Sharing, data['sharing']),
                max_bandwidth=int(data.get('max_bandwidth', 1)),
                technology_slot=data.get('slot', data['name']),
                top=bool(data.get('top', False)),
            )
        except KeyError as e:
            raise ArchitectureError(f"memory level missing field {e}") from e


@dataclass(frozen=True)
class ArchitectureSpec:
    """Accelerator organization; levels are ordered innermost first"""
    name: str
    pe_rows: int
    pe_cols: int
    dataflow: Dataflow
    mac_precision: int
    levels: Tuple[MemoryLevel, ...]
    base_node: int
    base_frequency: float  # Hz at base_node
    cpu_mem_word: Optional[int] = None
    description: str = field(default="", compare=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.pe_rows < 1 or self.pe_cols < 1:
            raise ArchitectureError(f"{self.name}: PE array must be at least 1x1")
        if self.dataflow is Dataflow.SEQUENTIAL_CPU:
            if (self.pe_rows, self.pe_cols) != (1, 1):
                raise ArchitectureError(f"{self.name}: SequentialCPU needs a 1x1 PE array")
            if not self.cpu_mem_word:
                raise ArchitectureError(f"{self.name}: SequentialCPU needs cpu_mem_word")
        if not self.levels:
            raise ArchitectureError(f"{self.name}: no memory levels")
        names = [lvl.name for lvl in self.levels]
        if len(set(names)) != len(names):
            raise ArchitectureError(f"{self.name}: duplicate level names")
        if any('dram' in n.lower() for n in names):
            raise ArchitectureError(f"{self.name}: off-chip DRAM levels are not modeled")
        tops = [lvl for lvl in self.levels if lvl.top]
        if len(tops) != 1 or tops[0].sharing is not Sharing.GLOBAL:
            raise ArchitectureError(f"{self.name}: exactly one Global level must be marked top")
        for dt in DataType:
            holders = self.holders(dt)
            if not holders:
                raise ArchitectureError(f"{self.name}: no level holds {dt.value}")
            if holders[-1].sharing is not Sharing.GLOBAL:
                raise ArchitectureError(f"{self.name}: outermost {dt.value} level must be Global")

    # --- hierarchy queries -------------------------------------------------

    def level(self, name: str) -> MemoryLevel:
        for lvl in self.levels:
            if lvl.name == name:
                return lvl
        raise ArchitectureError(f"{self.name}: no level named '{name}'")

    def holders(self, dt: DataType) -> List[MemoryLevel]:
        """Levels holding dt, innermost first"""
        return [lvl for lvl in self.levels if lvl.holds(dt)]

    def inner(self, dt: DataType) -> MemoryLevel:
        return self.holders(dt)[0]

    def backing(self, dt: DataType) -> MemoryLevel:
        return self.holders(dt)[-1]

    @property
    def activation_level(self) -> MemoryLevel:
        """Level receiving inter-layer activation hand-offs"""
        return self.backing(DataType.OUTPUTS)

    @property
    def pe_count(self) -> int:
        return self.pe_rows * self.pe_cols

    def instance_count(self, level: MemoryLevel) -> int:
        if level.sharing is Sharing.PER_PE:
            return self.pe_rows * self.pe_cols
        if level.sharing is Sharing.PER_ROW:
            return self.pe_rows
        return 1

    def access_width(self, level: MemoryLevel) -> int:
        """Bits moved per counted access"""
        if self.dataflow is Dataflow.SEQUENTIAL_CPU:
            return self.cpu_mem_word
        return level.word_width

    @property
    def slots(self) -> List[str]:
        seen: List[str] = []
        for lvl in self.levels:
            if lvl.technology_slot not in seen:
                seen.append(lvl.technology_slot)
        return seen

    @property
    def weight_slots(self) -> List[str]:
        return [s for s in self.slots
                if any(l.holds(DataType.WEIGHTS) for l in self.levels if l.technology_slot == s)]

    def levels_in_slot(self, slot: str) -> List[MemoryLevel]:
        return [l for l in self.levels if l.technology_slot == slot]

    def with_array(self, rows: int, cols: int, name: str) -> 'ArchitectureSpec':
        return ArchitectureSpec(
            name=name, pe_rows=rows, pe_cols=cols, dataflow=self.dataflow,
            mac_precision=self.mac_precision, levels=self.levels, base_node=self.base_node,
            base_frequency=self.base_frequency, cpu_mem_word=self.cpu_mem_word,
            description=self.description)

    # --- serialization -----------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'name': self.name,
            'pe_rows': self.pe_rows,
            'pe_cols': self.pe_cols,
            'dataflow': self.dataflow.value,
            'mac_precision': self.mac_precision,
            'base_node': self.base_node,
            'base_frequency_hz': self.base_frequency,
            'levels': [lvl.to_dict() for lvl in self.levels],
        }
        if self.cpu_mem_word is not None:
            data['cpu_mem_word'] = self.cpu_mem_word
        if self.description:
            data['description'] = self.description
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ArchitectureSpec':
        try:
            return cls(
                name=data['name'],
                pe_rows=int(data['pe_rows']),
                pe_cols=int(data['pe_cols']),
                dataflow=_enum(Dataflow, data['dataflow']),
                mac_precision=int(data['mac_precision']),
                levels=tuple(MemoryLevel.from_dict(l) for l in data['levels']),
                base_node=int(data['base_node']),
                base_frequency=float(data['base_frequency_hz']),
                cpu_mem_word=data.get('cpu_mem_word'),
                description=data.get('description', ''),
            )
        except KeyError as e:
            raise ArchitectureError(f"architecture missing field {e}") from e


@dataclass(frozen=True)
class MemoryAssignment:
    """Binds each technology slot to a device"""
    variant: AssignmentVariant
    device_per_slot: Dict[str, DeviceKind] = field(hash=False)

    @property
    def nvm_device(self) -> Optional[DeviceKind]:
        nvm = {d for d in self.device_per_slot.values() if d.is_nvm}
        return next(iter(nvm)) if len(nvm) == 1 else None

    def device(self, slot: str) -> DeviceKind:
        try:
            return self.device_per_slot[slot]
        except KeyError:
            raise AssignmentError(f"slot '{slot}' is not assigned") from None

    @property
    def label(self) -> str:
        if self.variant is AssignmentVariant.SRAM_ONLY:
            return 'SRAM'
        device = self.nvm_device
        return f"{self.variant.name}-{device.value if device else 'mixed'}"

    @classmethod
    def build(cls, arch: ArchitectureSpec, variant: AssignmentVariant,
              device: DeviceKind = DeviceKind.SRAM) -> 'MemoryAssignment':
        """Standard assignment for a variant, using `device` wherever NVM goes"""
        if variant is AssignmentVariant.SRAM_ONLY:
            mapping = {s: DeviceKind.SRAM for s in arch.slots}
        else:
            if not device.is_nvm:
                raise AssignmentError(f"{variant.name} needs an MRAM device, got {device.value}")
            nvm_slots = arch.weight_slots if variant is AssignmentVariant.P0 else arch.slots
            mapping = {s: (device if s in nvm_slots else DeviceKind.SRAM) for s in arch.slots}
        return validate_assignment(arch, cls(variant=variant, device_per_slot=mapping))[1]


def validate_assignment(arch: ArchitectureSpec, asg: MemoryAssignment) -> Tuple[ArchitectureSpec, MemoryAssignment]:
    """Return (arch, asg) if the slot map is exhaustive and obeys the variant rule"""
    slots = set(arch.slots)
    unknown = set(asg.device_per_slot) - slots
    if unknown:
        raise AssignmentError(f"{arch.name}: unknown slot(s) {', '.join(sorted(unknown))}")
    missing = slots - set(asg.device_per_slot)
    if missing:
        raise AssignmentError(f"{arch.name}: unassigned slot(s) {', '.join(sorted(missing))}")

    weight_slots = set(arch.weight_slots)
    for slot, device in asg.device_per_slot.items():
        if asg.variant is AssignmentVariant.SRAM_ONLY:
            ok = device is DeviceKind.SRAM
        elif asg.variant is AssignmentVariant.P1:
            ok = device.is_nvm
        else:
            ok = device.is_nvm if slot in weight_slots else device is DeviceKind.SRAM
        if not ok:
            raise AssignmentError(
                f"{arch.name}: {asg.variant.name} cannot put {device.value} in slot '{slot}'")
    return arch, asg
