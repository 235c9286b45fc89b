"""
CSV outputs: density histograms and analytic law tables, plus the YAML summary document.

Histogram CSV layout::

    x_lo,x_hi,density
    0,0.2,0.905...
    ...
    # count=409600 overflow=3
"""
import csv
import logging
import re
from pathlib import Path

import numpy as np
import yaml

from src.common.errors import SampleFormatError
from src.core.distributions import AnalyticLaw, cdf, pdf
from src.core.stats_tests import Histogram

HISTOGRAM_HEADER = ['x_lo', 'x_hi', 'density']
LAW_TABLE_HEADER = ['x', 'pdf', 'cdf']
SCHEMA_VERSION = 1
_TRAILER = re.compile(r'#\s*count=(\d+)\s+overflow=(\d+)')

logger = logging.getLogger(__name__)


def _fmt(value: float) -> str:
    return f'{float(value):.12g}'


def write_histogram_csv(h: Histogram, path: str | Path) -> Path:
    """
    Writes a histogram as CSV with 12 significant digits and a trailing count comment.
    :param h: The histogram.
    :param path: Destination file.
    :return: The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as file:
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(HISTOGRAM_HEADER)
        for lo, hi, density in zip(h.edges[:-1], h.edges[1:], h.densities):
            writer.writerow([_fmt(lo), _fmt(hi), _fmt(density)])
        file.write(f'# count={h.count} overflow={h.overflow}\n')
    logger.info("Wrote histogram (%d bins) to %s", h.densities.size, path)
    return path


def read_histogram_csv(path: str | Path) -> Histogram:
    """
    Reads a histogram written by write_histogram_csv.
    """
    path = Path(path)
    rows, count, overflow = [], None, 0
    with open(path, newline='') as file:
        lines = file.read().splitlines()
    for line in lines:
        match = _TRAILER.match(line)
        if match:
            count, overflow = int(match.group(1)), int(match.group(2))
    reader = csv.reader(line for line in lines if line and not line.startswith('#'))
    if next(reader, None) != HISTOGRAM_HEADER:
        raise SampleFormatError(f"{path}: missing histogram header {','.join(HISTOGRAM_HEADER)}")
    for row in reader:
        rows.append([float(value) for value in row])
    if not rows or count is None:
        raise SampleFormatError(f"{path}: histogram has no bins or no count trailer")
    table = np.array(rows)
    edges = np.append(table[:, 0], table[-1, 1])
    return Histogram(edges=edges, densities=table[:, 2], count=count, overflow=overflow)


def write_law_table(law: AnalyticLaw, grid: np.ndarray, path: str | Path) -> Path:
    """
    Tabulates pdf and cdf of a law on a grid, for plotting.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    densities = pdf(law, grid)
    cumulative = cdf(law, grid)
    with open(path, 'w', newline='') as file:
        file.write(f'# {law.describe()}\n')
        writer = csv.writer(file, lineterminator='\n')
        writer.writerow(LAW_TABLE_HEADER)
        for x, f, c in zip(grid, densities, cumulative):
            writer.writerow([_fmt(x), _fmt(f), _fmt(c)])
    logger.info("Wrote %s table (%d points) to %s", law.family.value, grid.size, path)
    return path


def write_summary(summary: dict, path: str | Path) -> Path:
    """
    Writes the run summary as YAML with sorted keys and a schema version, so that runs
    with identical inputs produce identical bytes.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {'schema_version': SCHEMA_VERSION, **summary}
    with open(path, 'w') as file:
        yaml.safe_dump(document, file, sort_keys=True, default_flow_style=False)
    logger.info("Wrote summary to %s", path)
    return path


def read_summary(path: str | Path) -> dict:
    with open(path) as file:
        return yaml.safe_load(file)
