import asyncio
import csv
import json
from types import SimpleNamespace

import numpy as np
import pytest

from eifg.__main__ import main
from eifg.core.exceptions import BlowUpError, ConfigError
from eifg.modules.bench import cmd_bench, growth_factors
from eifg.modules.converge import cmd_converge
from eifg.modules.simulate import FAILED_MARKER, cmd_simulate, snapshot_name
from eifg.utils.files import read_snapshot
from eifg.utils.runconfig import RunConfig


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def write_config(path, **data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


HEAT = {"problem": "heat", "params": {"dims": 1}, "scheme": "eifg1", "sizes": [16], "T": 1.0, "n_steps": 4}


def test_heat_smoke_run(tmp_path):
    config = RunConfig.from_dict(dict(HEAT, snapshot_stride=2))
    summary = asyncio.run(cmd_simulate(config, out=str(tmp_path)))
    assert summary["snapshots"] == 3
    values, time = asyncio.run(read_snapshot(tmp_path / snapshot_name(4)))
    x = np.arange(16) * (2 * np.pi / 16)
    assert time == 1.0
    np.testing.assert_allclose(values, np.exp(-1.0) * np.sin(x), atol=1e-10)
    rows = read_rows(tmp_path / "diagnostics.csv")
    assert rows[0] == ["t", "sup_norm"]
    assert len(rows) == 1 + 5
    assert not (tmp_path / FAILED_MARKER).exists()


def test_simulate_needs_single_run(tmp_path):
    config = RunConfig.from_dict(dict(HEAT, n_steps=[4, 8]))
    with pytest.raises(ConfigError):
        asyncio.run(cmd_simulate(config, out=str(tmp_path)))


def test_blow_up_leaves_marker(tmp_path, monkeypatch):
    monkeypatch.setattr("eifg.core.integrators.BLOWUP_LIMIT", 1e-3)
    config = RunConfig.from_dict(HEAT)
    with pytest.raises(BlowUpError):
        asyncio.run(cmd_simulate(config, out=str(tmp_path)))
    assert "blew up" in (tmp_path / FAILED_MARKER).read_text(encoding="utf-8")
    rows = read_rows(tmp_path / "diagnostics.csv")
    assert len(rows) == 2


def test_mcf_diagnostics_columns(tmp_path):
    config = RunConfig.from_dict(
        {
            "problem": "mcf",
            "params": {"epsilon": 0.075, "d": 2},
            "sizes": [32, 32],
            "T": 0.005,
            "n_steps": 4,
        }
    )
    asyncio.run(cmd_simulate(config, out=str(tmp_path)))
    rows = read_rows(tmp_path / "diagnostics.csv")
    assert rows[0] == ["t", "sup_norm", "radius", "R_lim"]
    assert float(rows[1][3]) == pytest.approx(0.4)


def test_converge_single_resolution(tmp_path):
    table = asyncio.run(cmd_converge(RunConfig.from_dict(HEAT), out=str(tmp_path)))
    assert len(table.records) == 1
    rows = read_rows(tmp_path / "converge.csv")
    assert rows[0] == ["N_T", "N_1", "e0", "CR0", "e1", "CR1", "e2", "CR2", "sec_per_step"]
    assert len(rows) == 2
    assert rows[1][:2] == ["4", "16"]
    assert rows[1][3] == rows[1][5] == rows[1][7] == ""


def test_converge_temporal_sweep_is_deterministic(tmp_path):
    config = RunConfig.from_dict(
        {
            "problem": "example1",
            "params": {"dims": 1},
            "sizes": [64],
            "T": 1.0,
            "n_steps": [4, 8, 16],
        }
    )
    first = tmp_path / "first"
    second = tmp_path / "second"
    asyncio.run(cmd_converge(config, out=str(first), jobs=3))
    asyncio.run(cmd_converge(config, out=str(second), jobs=1))
    strip = lambda rows: [row[:-1] for row in rows]
    rows = read_rows(first / "converge.csv")
    assert strip(rows) == strip(read_rows(second / "converge.csv"))
    assert [row[0] for row in rows[1:]] == ["4", "8", "16"]
    assert float(rows[3][5]) == pytest.approx(2.0, abs=0.3)


def test_converge_finest_reference_drops_finest(tmp_path):
    config = RunConfig.from_dict(
        {
            "problem": "mcf",
            "params": {"epsilon": 0.075, "d": 2},
            "sizes": [32, 32],
            "T": 0.005,
            "n_steps": [4, 8, 32],
            "reference": "finest",
        }
    )
    table = asyncio.run(cmd_converge(config, out=str(tmp_path)))
    assert [r.n_steps for r in table.records] == [4, 8]
    rows = read_rows(tmp_path / "converge.csv")
    assert rows[0][-2:] == ["radius_err", "CRr"]
    assert len(rows) == 3


def test_converge_without_exact_solution_fails_early(tmp_path, monkeypatch):
    def never(*args, **kwargs):
        raise AssertionError("no run may start")

    monkeypatch.setattr("eifg.modules.converge.run_resolution", never)
    config = RunConfig.from_dict(
        {"problem": "mcf", "sizes": [32, 32], "T": 0.01, "n_steps": [4, 8]}
    )
    with pytest.raises(ConfigError):
        asyncio.run(cmd_converge(config, out=str(tmp_path)))


def test_bench_single_resolution(tmp_path):
    factors = asyncio.run(cmd_bench(RunConfig.from_dict(HEAT), out=str(tmp_path)))
    assert factors == [None]
    rows = read_rows(tmp_path / "bench.csv")
    assert rows[0] == ["N_1", "N_T", "nodes", "sec_per_step", "growth"]
    assert rows[1][:3] == ["16", "4", "16"]
    assert rows[1][4] == ""


def test_growth_factor_definition():
    def run(nodes, seconds):
        return SimpleNamespace(grid=SimpleNamespace(n_nodes=nodes), sec_per_step=seconds)

    factors = growth_factors([run(4096, 1e-3), run(32768, 8e-3), run(262144, 6.4e-2)])
    assert factors[0] is None
    assert factors[1] == pytest.approx(1.0)
    assert factors[2] == pytest.approx(1.0)


def test_main_exit_codes(tmp_path):
    out = str(tmp_path / "out")
    good = write_config(tmp_path / "heat.json", **HEAT)
    assert main(["simulate", "--config", good, "--out", out]) == 0
    assert (tmp_path / "out" / "diagnostics.csv").exists()

    typo = write_config(tmp_path / "typo.json", **dict(HEAT, steps=4))
    assert main(["converge", "--config", typo, "--out", out]) == 2

    wrong_type = write_config(tmp_path / "stride.json", **dict(HEAT, snapshot_stride="2"))
    assert main(["simulate", "--config", wrong_type, "--out", out]) == 2

    no_exact = write_config(
        tmp_path / "mcf.json", problem="mcf", sizes=[16, 16], T=0.01, n_steps=[2, 4]
    )
    assert main(["converge", "--config", no_exact, "--out", out]) == 2

    assert main(["bench", "--config", str(tmp_path / "missing.json"), "--out", out]) == 4


def test_main_blow_up_exit_code(tmp_path, monkeypatch):
    monkeypatch.setattr("eifg.core.integrators.BLOWUP_LIMIT", 1e-3)
    path = write_config(tmp_path / "heat.json", **HEAT)
    assert main(["simulate", "--config", path, "--out", str(tmp_path / "out")]) == 3


def test_main_requires_a_command():
    with pytest.raises(SystemExit):
        main([])
