"""
Utility functions for memdse
"""
import hashlib
import logging
import os
from typing import Any, Iterable, List, Tuple

from .config import config


def setup_logging(level: str = "INFO") -> None:
    """Setup console + file logging"""
    log_dir = config.log.log_dir
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, 'memdse.log')

    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ]
    )


def file_sha256(path: Any) -> str:
    """Hex digest of a data file, used in report headers"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for block in iter(lambda: f.read(65536), b''):
            digest.update(block)
    return digest.hexdigest()


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def bytes_for(words: int, bits: int) -> int:
    """Bytes needed to hold `words` values of `bits` each"""
    return ceil_div(words * bits, 8)


def chunks(n: int, size: int) -> List[Tuple[int, int]]:
    """Split range(n) into consecutive (start, length) tiles; last tile partial"""
    return [(start, min(size, n - start)) for start in range(0, n, size)]


def covered_positions(extent: int, outputs: Iterable[int], kernel: int,
                      stride: int, pad: int) -> int:
    """Number of in-bounds input positions touched by the given output positions"""
    count = 0
    last_end = -1  # exclusive end of the merged interval so far
    for o in sorted(outputs):
        lo = max(0, o * stride - pad, last_end)
        hi = min(extent, o * stride - pad + kernel)
        if hi > lo:
            count += hi - lo
        last_end = max(last_end, hi)
    return count
