"""
Memory device kinds
"""
from enum import Enum


class DeviceKind(Enum):
    """Closed set of memory devices"""
    SRAM = "SRAM"
    STT = "STT"
    SOT = "SOT"
    VGSOT = "VGSOT"

    @property
    def is_nvm(self) -> bool:
        return self is not DeviceKind.SRAM

    @classmethod
    def parse(cls, value: str) -> 'DeviceKind':
        for kind in cls:
            if kind.value.lower() == str(value).lower():
                return kind
        raise ValueError(f"unknown device '{value}' (choose from {', '.join(k.value for k in cls)})")


MRAM_KINDS = (DeviceKind.STT, DeviceKind.SOT, DeviceKind.VGSOT)
