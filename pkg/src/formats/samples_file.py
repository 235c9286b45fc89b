"""
Sample files.

Two formats are accepted by ``read_samples``:

1. Plain text: one bit-string of '0'/'1' characters per line. The first bit-string
   fixes n; qubit 0 is the leftmost character (the most significant bit). Blank lines
   and lines starting with '#' are skipped.

       00
       01
       01

2. A counts document (YAML or JSON) with an integer ``n`` and a ``counts`` mapping from
   quoted bit-strings to positive integer counts. Optional keys: ``seed``,
   ``lambda_claim``, ``a_bits``.

       {"n": 2, "counts": {"11": 5}}

A file whose first non-blank character is '{', or whose suffix is .json/.yaml/.yml,
is read as a counts document.
"""
import logging
from pathlib import Path

import yaml

from src.common.errors import SampleFormatError, SampleParseError
from src.core.marginals import Partition
from src.core.xeb import SampleMeta, SampleSet
from src.utils.utils import Utils

DOCUMENT_SUFFIXES = ('.json', '.yaml', '.yml')

logger = logging.getLogger(__name__)


def _is_document(path: Path, text: str) -> bool:
    return path.suffix.lower() in DOCUMENT_SUFFIXES or text.lstrip().startswith('{')


def _parse_text(path: Path, text: str) -> SampleSet:
    counts: dict[int, int] = {}
    n = None
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if any(char not in '01' for char in line):
            raise SampleParseError(path, line_number, f"not a bit-string: {line!r}")
        if n is None:
            n = len(line)
        elif len(line) != n:
            raise SampleFormatError(f"{path}:{line_number}: bit-string of length {len(line)}, expected {n}")
        index = int(line, 2)
        counts[index] = counts.get(index, 0) + 1
    if n is None:
        raise SampleParseError(path, 1, "file contains no bit-strings")
    return SampleSet(n, counts, sum(counts.values()), SampleMeta(source=str(path)))


def _parse_document(path: Path, text: str) -> SampleSet:
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as error:
        mark = getattr(error, 'problem_mark', None)
        raise SampleParseError(path, mark.line + 1 if mark else 1, f"invalid counts document: {error}") from error
    if not isinstance(document, dict) or 'counts' not in document or 'n' not in document:
        raise SampleFormatError(f"{path}: a counts document needs 'n' and 'counts' fields")
    n = document['n']
    if not isinstance(n, int) or n < 1:
        raise SampleFormatError(f"{path}: 'n' must be a positive integer, got {n!r}")
    raw_counts = document['counts'] or {}
    if not isinstance(raw_counts, dict):
        raise SampleFormatError(f"{path}: 'counts' must map bit-strings to integers")
    counts: dict[int, int] = {}
    for bits, count in raw_counts.items():
        if not isinstance(bits, str):
            raise SampleFormatError(f"{path}: bit-string key {bits!r} must be quoted")
        if len(bits) != n or any(char not in '01' for char in bits):
            raise SampleFormatError(f"{path}: key {bits!r} is not a bit-string of length {n}")
        if not isinstance(count, int) or count < 0:
            raise SampleFormatError(f"{path}: count for {bits!r} must be a non-negative integer, got {count!r}")
        if count:
            counts[Utils.bitstring_to_index(bits)] = counts.get(Utils.bitstring_to_index(bits), 0) + count
    if not counts:
        raise SampleFormatError(f"{path}: counts document holds no samples")
    a_bits = document.get('a_bits')
    meta = SampleMeta(
        seed=document.get('seed'),
        lambda_claim=document.get('lambda_claim'),
        partition=Partition(n, tuple(a_bits)) if a_bits else None,
        source=str(path))
    return SampleSet(n, counts, sum(counts.values()), meta)


def read_samples(path: str | Path) -> SampleSet:
    """
    Reads a sample file in either supported format.
    :param path: Path to a text or counts-document file.
    :return: The SampleSet.
    """
    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as error:
        line_number = data.count(b'\n', 0, error.start) + 1
        raise SampleParseError(path, line_number, f"not UTF-8 text (byte {data[error.start]:#04x})") from error
    sample_set = _parse_document(path, text) if _is_document(path, text) else _parse_text(path, text)
    logger.info("Read %d samples of %d qubits from %s", sample_set.total, sample_set.n, path)
    return sample_set


def write_samples(sample_set: SampleSet, path: str | Path) -> Path:
    """
    Writes a SampleSet as a YAML counts document with bit-strings sorted by index.
    :param sample_set: The samples to write.
    :param path: Destination file.
    :return: The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    keys, counts = sample_set.arrays()
    document = {
        'n': sample_set.n,
        'counts': {Utils.index_to_bitstring(int(key), sample_set.n): int(count) for key, count in zip(keys, counts)},
    }
    meta = sample_set.meta
    if meta.seed is not None:
        document['seed'] = int(meta.seed)
    if meta.lambda_claim is not None:
        document['lambda_claim'] = float(meta.lambda_claim)
    if meta.partition is not None:
        document['a_bits'] = list(meta.partition.a_bits)
    with open(path, 'w') as file:
        yaml.safe_dump(document, file, sort_keys=False, default_flow_style=False)
    logger.info("Wrote %d samples to %s", sample_set.total, path)
    return path
