#!/usr/bin/env python3
"""
Test script for scenarios, sweeps and table output
"""
import json
import math

import pandas as pd
import pytest

from memdse.arch import AssignmentVariant
from memdse.errors import ScenarioError
from memdse.report import (Scenario, area_table, crossover_table, curve_table, energy_table,
                           header_line, latency_savings_table, level_table, merge_metadata,
                           render, run_scenario, run_sweep, sweep_grid, write_table)
from memdse.technology import DeviceKind


@pytest.fixture(scope="module")
def simba_sram():
    return run_scenario(Scenario(workload="detnet", arch="simba-like", node=7))


def test_scenario_validation():
    with pytest.raises(ScenarioError):
        Scenario(workload="detnet", arch="simba-like", device=DeviceKind.SRAM)
    with pytest.raises(ScenarioError):
        Scenario(workload="detnet", arch="simba-like", ips_min=0.0)
    key = Scenario(workload="detnet", arch="simba-like", variant=AssignmentVariant.P1).key
    assert key == "detnet_simba-like_p1-vgsot_7nm"


def test_unknown_node_is_reported():
    with pytest.raises(ScenarioError, match="13"):
        run_scenario(Scenario(workload="detnet", arch="simba-like", node=13))


def test_unknown_arch_is_reported():
    with pytest.raises(ScenarioError, match="tpu-like"):
        run_scenario(Scenario(workload="detnet", arch="tpu-like"))


def test_report_contents(simba_sram):
    r = simba_sram
    assert r.network == "detnet"
    assert r.label == "SRAM"
    assert r.area_savings == 0.0
    assert r.edp == pytest.approx(r.energy.grand_total * 1e-12 * r.latency.latency)
    assert set(r.power_savings()) == {"P0-VGSOT", "P1-VGSOT"}
    assert set(r.metadata) == {"schema", "version", "tech_sha256", "arch_sha256",
                               "workload_sha256"}
    assert all(len(r.metadata[k]) == 64 for k in ("tech_sha256", "arch_sha256",
                                                   "workload_sha256"))


def test_sweep_grid_cardinality():
    base = Scenario(workload="detnet", arch="simba-like")
    points = sweep_grid(base, tuple(AssignmentVariant), (DeviceKind.VGSOT,), (28, 7))
    assert len(points) == 6
    assert [p.node for p in points] == [28, 28, 28, 7, 7, 7]
    two_devices = sweep_grid(base, tuple(AssignmentVariant), (DeviceKind.STT, DeviceKind.VGSOT),
                             (28, 7))
    assert len(two_devices) == 10
    with pytest.raises(ScenarioError):
        sweep_grid(base, (), (DeviceKind.VGSOT,), (7,))


def test_sweep_keeps_order_and_collects_failures():
    base = Scenario(workload="detnet", arch="eyeriss-like")
    points = sweep_grid(base, tuple(AssignmentVariant), (DeviceKind.VGSOT,), (13, 7))
    result = run_sweep(points, n_jobs=1)
    assert not result.ok
    assert len(result.errors) == 3
    assert [r.scenario for r in result.reports] == points[3:]
    with pytest.raises(ScenarioError):
        run_sweep([])


def test_tables():
    base = Scenario(workload="detnet", arch="simba-like")
    reports = run_sweep(sweep_grid(base, tuple(AssignmentVariant), (DeviceKind.VGSOT,), (7,)),
                        n_jobs=1).reports
    energy = energy_table(reports)
    assert list(energy.variant) == ["SRAM", "P0-VGSOT", "P1-VGSOT"]
    assert energy.vs_sram.iloc[0] == 0.0

    latency = latency_savings_table(reports)
    assert len(latency) == 1
    assert 0.20 <= latency.savings_p0.iloc[0] <= 0.35
    assert latency.latency_p1_ms.iloc[0] > latency.latency_p0_ms.iloc[0]

    area = area_table(reports)
    assert len(area) == 1
    assert area.p1_savings.iloc[0] > area.p0_savings.iloc[0] > 0


def test_per_scenario_tables(simba_sram):
    levels = level_table(simba_sram)
    assert {"read_pj", "write_pj", "demand_words_per_cycle"} <= set(levels.columns)
    assert levels.read_pj.sum() + levels.write_pj.sum() == pytest.approx(
        simba_sram.energy.mem_total)
    assert list(crossover_table(simba_sram).columns[:2]) == ["workload", "arch"]
    curve = curve_table(simba_sram)
    assert set(curve.device) == {"SRAM", "VGSOT"}


def test_render_is_deterministic():
    df = pd.DataFrame({"a": [1, 2], "b": [0.1 + 0.2, math.nan], "c": ["x", "y"]})
    meta = {"schema": "1", "version": "1.0.0", "tech_sha256": "ab"}
    first = render(df, meta)
    assert first == render(df.copy(), dict(meta))
    assert first.startswith("# memdse schema=1 version=1.0.0 tech_sha256=ab arch_sha256= ")
    assert first.splitlines()[1] == "a,b,c"
    assert "0.3," in first


def test_markdown_output():
    df = pd.DataFrame({"arch": ["simba-like"], "p0_savings": [0.17]})
    text = render(df, {"schema": "1"}, "md")
    lines = text.splitlines()
    assert lines[0].startswith("<!-- memdse schema=1")
    assert lines[1] == "| arch | p0_savings |"
    assert lines[3] == "| simba-like | 0.17 |"
    with pytest.raises(ValueError):
        render(df, {}, "xlsx")


def test_write_table_is_byte_identical(tmp_path):
    df = pd.DataFrame({"x": [1.0 / 3, 2.0], "y": ["a", "b"]})
    meta = {"schema": "1"}
    first = write_table(df, tmp_path / "one", "t", meta).read_bytes()
    second = write_table(df, tmp_path / "two", "t", meta).read_bytes()
    assert first == second
    assert b"\r\n" not in first


def test_merge_metadata():
    merged = merge_metadata([{"schema": "1", "arch_sha256": "a"},
                             {"schema": "1", "arch_sha256": "b"}])
    assert merged == {"schema": "1", "arch_sha256": "a+b"}
    assert header_line(merged).startswith("# memdse schema=1 version= tech_sha256= arch_sha256=a+b")


def test_unreachable_rate_skips_duty_cycle():
    """DetNet cannot run 10 times a second on the scalar core"""
    r = run_scenario(Scenario(workload="detnet", arch="cpu"))
    assert r.latency.latency > 0.1
    assert r.duty is None and r.curve is None
    assert r.power_savings() == {}
    assert latency_savings_table([r]).empty


def test_latency_table_on_v2_arrays():
    base = run_scenario(Scenario(workload="detnet", arch="simba-like"))
    v2 = run_scenario(Scenario(workload="detnet", arch="simba-v2"))
    table = latency_savings_table([base, v2])
    assert list(table.arch) == ["simba-like", "simba-v2"]
    row = table.iloc[1]
    assert row.latency_p0_ms < table.latency_p0_ms.iloc[0]
    assert row.latency_p1_ms >= row.latency_p0_ms
    assert row.savings_p1 > row.savings_p0 > 0


def test_sweep_collects_malformed_workload(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"schema": 1, "name": "broken", "input": {"h": 8, "w": 8},
                                  "layers": [{"kind": "Conv2D", "m": 4}]}))
    points = [Scenario(workload=str(broken), arch="simba-like"),
              Scenario(workload="detnet", arch="simba-like")]
    result = run_sweep(points, n_jobs=1)
    assert [r.network for r in result.reports] == ["detnet"]
    [(point, error)] = result.errors
    assert point is points[0]
    assert "[workload]" in error and "'input'" in error


def test_sweep_collects_unexpected_errors(monkeypatch):
    import memdse.report.scenario as scenario_module

    def explode(net, arch):
        raise KeyError("c")

    monkeypatch.setattr(scenario_module, "map_network", explode)
    result = run_sweep([Scenario(workload="detnet", arch="cpu")], n_jobs=1)
    assert not result.reports
    [(_, error)] = result.errors
    assert "KeyError" in error
    assert "test_report" in error
