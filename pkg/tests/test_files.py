import asyncio
import struct

import numpy as np
import pytest

from eifg.core.exceptions import SnapshotFormatError
from eifg.utils.files import (
    decode_snapshot,
    encode_snapshot,
    ensure_writable,
    read_snapshot,
    render_csv,
    write_csv,
    write_snapshot,
)
from eifg.utils.formatter import format_cell, get_readable_time


def test_snapshot_layout():
    values = np.arange(6, dtype=float).reshape(2, 3)
    data = encode_snapshot(values, 0.25)
    assert data[:4] == b"EIFG"
    assert struct.unpack_from("<I", data, 4) == (1,)
    assert data[8] == 2
    assert struct.unpack_from("<2Q", data, 9) == (2, 3)
    assert struct.unpack_from("<d", data, 25) == (0.25,)
    assert len(data) == 4 + 4 + 1 + 16 + 8 + 8 * 6
    assert np.frombuffer(data[33:], dtype="<f8").tolist() == [0, 1, 2, 3, 4, 5]


def test_snapshot_round_trip_is_bit_exact(tmp_path, rng):
    values = rng.standard_normal((4, 6, 2)) * 1e-300
    path = tmp_path / "snapshot_000001.eifg"
    asyncio.run(write_snapshot(path, values, 1 / 3))
    restored, time = asyncio.run(read_snapshot(path))
    assert time == 1 / 3
    assert restored.tobytes() == values.tobytes()


@pytest.mark.parametrize(
    "data",
    [
        b"EIF",
        b"XXXX" + bytes(20),
        struct.pack("<4sIB", b"EIFG", 2, 1) + bytes(16),
        struct.pack("<4sIB", b"EIFG", 1, 1) + struct.pack("<Q", 4) + struct.pack("<d", 0.0) + bytes(8),
        struct.pack("<4sIB", b"EIFG", 1, 2) + bytes(4),
    ],
)
def test_bad_snapshots_are_rejected(data):
    with pytest.raises(SnapshotFormatError):
        decode_snapshot(data)


def test_render_csv():
    text = render_csv(["a", "b"], [["1", ""], ["2", "3"]])
    assert text == "a,b\n1,\n2,3\n"


def test_write_csv(tmp_path):
    path = asyncio.run(write_csv(tmp_path / "out.csv", ["x"], [["1.0"]]))
    assert path.read_text(encoding="utf-8") == "x\n1.0\n"


def test_ensure_writable_creates_directories(tmp_path):
    target = ensure_writable(tmp_path / "a" / "b")
    assert target.is_dir()


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(float("nan")) == ""
    assert format_cell(float("inf")) == ""
    assert format_cell(1.5) == "1.500000e+00"
    assert format_cell(np.float64(2e-7)) == "2.000000e-07"
    assert format_cell(3) == "3"


def test_readable_time():
    assert get_readable_time(1.234) == "1.23s"
    assert get_readable_time(125) == "2m:5s"
