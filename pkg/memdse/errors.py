"""
Exception types shared across memdse modules
"""
from typing import Optional


class MemdseError(ValueError):
    """Root of all memdse errors"""
    module = "memdse"

    def qualified(self) -> str:
        return f"[{self.module}] {self}"


class WorkloadParseError(MemdseError):
    """Network file could not be parsed"""
    module = "workload"

    def __init__(self, message: str, layer_index: Optional[int] = None):
        if layer_index is not None:
            message = f"layer {layer_index}: {message}"
        super().__init__(message)
        self.layer_index = layer_index


class WorkloadValidationError(MemdseError):
    """A layer or network violates its invariants"""
    module = "workload"

    def __init__(self, message: str, layer_index: Optional[int] = None):
        if layer_index is not None:
            message = f"layer {layer_index}: {message}"
        super().__init__(message)
        self.layer_index = layer_index


class ArchitectureError(MemdseError):
    """Architecture description is invalid or unknown"""
    module = "arch"


class AssignmentError(MemdseError):
    """Memory assignment does not fit the architecture or its variant"""
    module = "arch"


class UnmappableLayerError(MemdseError):
    """A layer cannot be tiled onto the hierarchy"""
    module = "mapper"

    def __init__(self, level: str, required_words: int, available_words: int,
                 layer_index: Optional[int] = None):
        message = (f"level '{level}' needs {required_words} words, "
                   f"has {available_words}")
        if layer_index is not None:
            message = f"layer {layer_index}: {message}"
        super().__init__(message)
        self.level = level
        self.required_words = required_words
        self.available_words = available_words
        self.layer_index = layer_index


class OracleGuardError(MemdseError):
    """Layer too large for the brute-force oracle"""
    module = "mapper"


class TechLibraryError(MemdseError):
    """Device/node missing from the technology library"""
    module = "technology"


class ScalingPathError(TechLibraryError):
    """No scaling entry connects two nodes"""


class IpsRangeError(MemdseError):
    """Requested inference rate outside [0, ips_max]"""
    module = "duty_cycle"


class ScenarioError(MemdseError):
    """Scenario could not be resolved or run"""
    module = "report"
