"""
Configuration settings for memdse, overridable through the environment
"""
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

DATA_DIR = Path(__file__).parent / 'data'


def _env(name: str, default: str) -> str:
    return os.getenv(name, default)


@dataclass
class DataConfig:
    """Locations of the versioned data files"""
    tech_path: str = field(default_factory=lambda: _env('MEMDSE_TECH', str(DATA_DIR / 'tech.json')))
    arch_path: str = field(default_factory=lambda: _env('MEMDSE_ARCH_FILE', str(DATA_DIR / 'architectures.json')))
    network_dir: str = field(default_factory=lambda: _env('MEMDSE_NETWORK_DIR', str(DATA_DIR / 'networks')))
    schema_version: int = 1


@dataclass
class SweepConfig:
    """Sweep execution settings"""
    max_workers: int = field(default_factory=lambda: int(_env('MEMDSE_WORKERS', '4')))
    ips_low: float = 1e-2
    ips_high: float = 1e3
    points_per_decade: int = 10
    default_ips_min: float = 10.0


@dataclass
class OutputConfig:
    """Report output settings"""
    out_dir: str = field(default_factory=lambda: _env('MEMDSE_OUT_DIR', 'results'))
    float_format: str = '%.9g'
    default_format: str = 'csv'


@dataclass
class LogConfig:
    """Logging settings"""
    log_dir: str = field(default_factory=lambda: _env('MEMDSE_LOG_DIR', 'logs'))
    level: str = field(default_factory=lambda: _env('MEMDSE_LOG_LEVEL', 'INFO'))


class Config:
    def __init__(self):
        self.data = DataConfig()
        self.sweep = SweepConfig()
        self.output = OutputConfig()
        self.log = LogConfig()


config = Config()
