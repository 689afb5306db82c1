#!/usr/bin/env python3
"""
Test script for the technology library: device parameters, node scaling, macro sizing
"""
import json

import pytest
from hypothesis import given, strategies as st

from memdse.arch import AssignmentVariant, MemoryAssignment, get_architecture
from memdse.errors import ScalingPathError, TechLibraryError
from memdse.technology import (DeviceKind, MacroScaling, MemDeviceParams, default_library,
                               library_from_dict, load_tech_library)
from memdse.config import config

NODES = [45, 40, 28, 22, 7]


@pytest.fixture
def tech_data():
    with open(config.data.tech_path) as f:
        return json.load(f)


def test_default_library_loads_cleanly():
    library = default_library()
    assert library.nodes == (45, 40, 28, 22, 7)
    assert library.validate() == []
    assert len(library.sha256) == 64
    for device in DeviceKind:
        for node in NODES:
            assert library.params(device, node).read_energy > 0


def test_node_energy_envelope():
    """Going from 40 nm to 7 nm cuts energy by 3.5x to 4x"""
    library = default_library()
    x = 1.0
    scaled = library.scale_energy(x, 40, 7)
    assert x / 4 <= scaled <= x / 3.5


@given(st.sampled_from(NODES), st.sampled_from(NODES), st.sampled_from(NODES))
def test_scaling_composes(a, b, c):
    library = default_library()
    for axis in ("energy", "latency", "area"):
        direct = library.factor(axis, a, c)
        via = library.factor(axis, a, b) * library.factor(axis, b, c)
        assert direct == pytest.approx(via, rel=1e-12)
        assert library.factor(axis, a, a) == 1.0


def test_unknown_node_and_axis():
    library = default_library()
    with pytest.raises(TechLibraryError, match="13"):
        library.params(DeviceKind.SRAM, 13)
    with pytest.raises(TechLibraryError):
        library.check_node(13)
    assert library.check_node(28) == 28
    with pytest.raises(TechLibraryError):
        library.factor("power", 40, 7)


def test_missing_scaling_step(tech_data):
    tech_data["scaling"] = [s for s in tech_data["scaling"] if s["from"] != 28]
    library = library_from_dict(tech_data)
    with pytest.raises(ScalingPathError):
        library.factor("energy", 40, 7)
    assert library.factor("energy", 45, 28) == pytest.approx(0.95 * 0.62)


def test_relative_entries_follow_sram():
    library = default_library()
    sram = library.params(DeviceKind.SRAM, 7)
    vgsot = library.params(DeviceKind.VGSOT, 7)
    assert vgsot.read_energy == pytest.approx(7.0 * sram.read_energy)
    assert vgsot.write_energy == pytest.approx(0.5 * sram.write_energy)
    assert vgsot.read_latency == 1.5
    assert vgsot.standby_ratio == sram.standby_ratio


def test_absolute_entry_scaled_from_nearest_node():
    library = default_library()
    stt28 = library.params(DeviceKind.STT, 28)
    stt22 = library.params(DeviceKind.STT, 22)
    assert stt22.read_energy == pytest.approx(stt28.read_energy * 0.80)
    assert stt22.write_latency == pytest.approx(stt28.write_latency * 0.85)


def test_cell_area_ratios():
    library = default_library()
    sram = library.cell_area_um2(DeviceKind.SRAM, 7)
    assert library.cell_area_um2(DeviceKind.STT, 7) == pytest.approx(sram / 2.5)
    assert library.cell_area_um2(DeviceKind.VGSOT, 7) == pytest.approx(sram / 2.3)
    assert library.bitcell_ratio(DeviceKind.SOT) == pytest.approx(1 / 1.3)


def test_mac_energy():
    library = default_library()
    assert library.mac_energy(40, 8) == pytest.approx(0.30)
    assert library.mac_energy(7, 8) < library.mac_energy(28, 8) < library.mac_energy(40, 8)
    with pytest.raises(TechLibraryError, match="4-bit"):
        library.mac_energy(40, 4)


def test_periphery_brackets_shrink_with_capacity():
    library = default_library()
    small = library.periphery_bracket(512).factor
    medium = library.periphery_bracket(65536).factor
    large = library.periphery_bracket(1 << 20).factor
    assert small > medium > large > 1.0


def test_macro_scaling():
    macro = MacroScaling(ref_bytes=8192, energy_exponent=0.2)
    assert macro.energy_factor(8192) == 1.0
    assert macro.energy_factor(1 << 20) == pytest.approx(128 ** 0.2)
    assert macro.energy_factor(512) < 1.0
    assert macro.latency_factor(1 << 20) == 1.0
    with pytest.raises(TechLibraryError):
        MacroScaling(ref_bytes=0)


def test_resolve_sizes_parameters_to_level():
    library = default_library()
    simba = get_architecture("simba-like")
    asg = MemoryAssignment.build(simba, AssignmentVariant.SRAM_ONLY)
    base = library.params(DeviceKind.SRAM, 7)
    glb = library.resolve(simba.level("glb"), asg, 7)
    buf = library.resolve(simba.level("weight_buf"), asg, 7)
    assert buf.read_energy == pytest.approx(base.read_energy)
    assert glb.read_energy == pytest.approx(base.read_energy * 128 ** 0.2)

    flat = library.with_macro_scaling(MacroScaling())
    assert flat.resolve(simba.level("glb"), asg, 7) == base


def test_params_validation():
    with pytest.raises(TechLibraryError):
        MemDeviceParams(read_energy=0.0, write_energy=1, read_latency=1, write_latency=1,
                        standby_ratio=0.1, wakeup_time=1, bitcell_area=100)
    with pytest.raises(TechLibraryError):
        MemDeviceParams(read_energy=1, write_energy=1, read_latency=1, write_latency=1,
                        standby_ratio=1.5, wakeup_time=1, bitcell_area=100)


def test_with_params_override():
    library = default_library()
    custom = MemDeviceParams(read_energy=0.01, write_energy=0.02, read_latency=1.0,
                             write_latency=2.0, standby_ratio=0.05, wakeup_time=10.0,
                             bitcell_area=100.0)
    patched = library.with_params(DeviceKind.STT, 7, custom)
    assert patched.params(DeviceKind.STT, 7) == custom
    assert library.params(DeviceKind.STT, 7) != custom


def test_bad_files(tmp_path, tech_data):
    path = tmp_path / "tech.json"
    path.write_text("[")
    with pytest.raises(TechLibraryError):
        load_tech_library(path)

    tech_data["schema"] = 9
    with pytest.raises(TechLibraryError, match="schema"):
        library_from_dict(tech_data)

    tech_data["schema"] = 1
    del tech_data["mac"]
    with pytest.raises(TechLibraryError, match="malformed"):
        library_from_dict(tech_data)


def test_self_relative_entry_rejected(tech_data):
    tech_data["devices"]["SOT"]["22"] = {"relative_to": "SOT", "read_energy_ratio": 2.0}
    library = library_from_dict(tech_data)
    with pytest.raises(TechLibraryError, match="itself"):
        library.params(DeviceKind.SOT, 22)
