"""
Snapshot and CSV files.

Snapshot layout (little endian):
    b"EIFG" | u32 version=1 | u8 dims | u64 * dims sizes | f64 time |
    f64 * prod(sizes) nodal values, row-major
"""
import csv
import io
import os
import struct
from pathlib import Path
from typing import Iterable, Sequence, Tuple

import aiofiles
import numpy as np

from eifg.core.exceptions import SnapshotFormatError

MAGIC = b"EIFG"
VERSION = 1
_PREFIX = struct.Struct("<4sIB")


def encode_snapshot(values: np.ndarray, time: float) -> bytes:
    values = np.asarray(values, dtype="<f8")
    header = _PREFIX.pack(MAGIC, VERSION, values.ndim)
    header += struct.pack(f"<{values.ndim}Q", *values.shape)
    header += struct.pack("<d", float(time))
    return header + np.ascontiguousarray(values).tobytes(order="C")


def decode_snapshot(data: bytes) -> Tuple[np.ndarray, float]:
    if len(data) < _PREFIX.size:
        raise SnapshotFormatError("truncated snapshot header")
    magic, version, dims = _PREFIX.unpack_from(data, 0)
    if magic != MAGIC:
        raise SnapshotFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    offset = _PREFIX.size
    try:
        sizes = struct.unpack_from(f"<{dims}Q", data, offset)
        offset += 8 * dims
        (time,) = struct.unpack_from("<d", data, offset)
    except struct.error as e:
        raise SnapshotFormatError(f"truncated snapshot header: {e}") from e
    offset += 8
    expected = 8 * int(np.prod(sizes))
    if len(data) - offset != expected:
        raise SnapshotFormatError(
            f"payload has {len(data) - offset} bytes, expected {expected}"
        )
    values = np.frombuffer(data, dtype="<f8", offset=offset).reshape(sizes).astype(float)
    return values, time


async def write_snapshot(path: Path, values: np.ndarray, time: float) -> Path:
    async with aiofiles.open(path, "wb") as f:
        await f.write(encode_snapshot(values, time))
    return path


async def read_snapshot(path: Path) -> Tuple[np.ndarray, float]:
    async with aiofiles.open(path, "rb") as f:
        return decode_snapshot(await f.read())


def render_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


async def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(render_csv(header, rows))
    return path


async def write_text(path: Path, text: str) -> Path:
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(text)
    return path


def ensure_writable(directory: Path) -> Path:
    """Create ``directory`` and fail early (OSError) if it cannot be written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if not os.access(directory, os.W_OK):
        raise PermissionError(f"output directory {directory} is not writable")
    return directory
