"""
Table output: CSV or markdown, each file led by a provenance header line
"""
import logging
import math
from pathlib import Path
from typing import Dict, Iterable, Union

import pandas as pd

from ..config import config

logger = logging.getLogger(__name__)

FORMATS = {'csv': '.csv', 'md': '.md'}
HEADER_KEYS = ('schema', 'version', 'tech_sha256', 'arch_sha256', 'workload_sha256')


def merge_metadata(items: Iterable[Dict[str, str]]) -> Dict[str, str]:
    """Union of several reports' metadata; differing values are joined with '+'"""
    merged: Dict[str, list] = {}
    for meta in items:
        for key, value in meta.items():
            values = merged.setdefault(key, [])
            if value not in values:
                values.append(value)
    return {key: '+'.join(values) for key, values in merged.items()}


def header_line(metadata: Dict[str, str], fmt: str = 'csv') -> str:
    fields = ' '.join(f"{k}={metadata.get(k, '')}" for k in HEADER_KEYS)
    line = f"memdse {fields}"
    return f"<!-- {line} -->" if fmt == 'md' else f"# {line}"


def _cell(value) -> str:
    if isinstance(value, float):
        return 'nan' if math.isnan(value) else config.output.float_format % value
    return str(value)


def to_markdown(df: pd.DataFrame) -> str:
    lines = ['| ' + ' | '.join(map(str, df.columns)) + ' |',
             '|' + '|'.join('---' for _ in df.columns) + '|']
    for row in df.itertuples(index=False):
        lines.append('| ' + ' | '.join(_cell(v) for v in row) + ' |')
    return '\n'.join(lines) + '\n'


def render(df: pd.DataFrame, metadata: Dict[str, str], fmt: str = 'csv') -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown output format '{fmt}' (choose from {', '.join(FORMATS)})")
    if fmt == 'md':
        body = to_markdown(df)
    else:
        body = df.to_csv(index=False, lineterminator='\n', float_format=config.output.float_format)
    return header_line(metadata, fmt) + '\n' + body


def write_table(df: pd.DataFrame, out_dir: Union[str, Path], name: str,
                metadata: Dict[str, str], fmt: str = 'csv') -> Path:
    """Write `name` + extension under out_dir; returns the path"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{name}{FORMATS.get(fmt, '')}"
    with open(path, 'w', newline='') as f:
        f.write(render(df, metadata, fmt))
    logger.info(f"Wrote {path} ({len(df)} rows)")
    return path
