#!/usr/bin/env python3
"""
Test script for the memory and compute area model
"""
import pytest

from memdse.arch import AssignmentVariant, MemoryAssignment, get_architecture
from memdse.area import area_frame, area_summary, compare_areas, memory_area, total_area
from memdse.technology import DeviceKind, default_library


def test_same_device_same_area():
    assert memory_area(8192, DeviceKind.SRAM, 7) == memory_area(8192, DeviceKind.SRAM, 7)


def test_stt_array_ratio():
    """With periphery taken out, STT occupies 1/2.5 of the SRAM array"""
    library = default_library()
    cap = 65536
    extra = library.periphery_bracket(cap).factor - 1.0
    array = cap * 8 * library.cell_area_um2(DeviceKind.SRAM, 7) / 1e6
    sram = memory_area(cap, DeviceKind.SRAM, 7) - extra * array
    stt = memory_area(cap, DeviceKind.STT, 7) - extra * array
    assert stt / sram == pytest.approx(1 / 2.5)


def test_small_macros_pay_more_periphery():
    small = memory_area(8192, DeviceKind.SRAM, 7) / 8192
    large = memory_area(1 << 20, DeviceKind.SRAM, 7) / (1 << 20)
    assert small > large


def test_bad_capacity():
    with pytest.raises(ValueError):
        memory_area(0, DeviceKind.SRAM, 7)


@pytest.mark.parametrize("name", ["eyeriss-like", "simba-like"])
def test_totals_and_savings_order(name):
    arch = get_architecture(name)
    areas = compare_areas(arch, 7)
    assert list(areas) == ["SRAM", "P0-VGSOT", "P1-VGSOT"]
    sram = areas["SRAM"]
    assert sram.savings_vs(sram) == 0.0
    for est in areas.values():
        assert est.total == pytest.approx(sum(est.levels.values()) + est.compute)
        assert all(mm2 > 0 for mm2 in est.levels.values())
    p0 = areas["P0-VGSOT"].savings_vs(sram)
    p1 = areas["P1-VGSOT"].savings_vs(sram)
    assert 0 < p0 < p1


def test_savings_do_not_depend_on_node():
    simba = get_architecture("simba-like")
    savings = {}
    for node in (40, 28, 7):
        areas = compare_areas(simba, node)
        savings[node] = areas["P1-VGSOT"].savings_vs(areas["SRAM"])
    assert savings[28] == pytest.approx(savings[7], rel=1e-9)
    assert savings[40] == pytest.approx(savings[7], rel=1e-9)


def test_simba_and_eyeriss_magnitudes():
    simba = compare_areas(get_architecture("simba-like"), 7)
    assert simba["SRAM"].total == pytest.approx(2.89, rel=0.15)
    assert 0.10 <= simba["P0-VGSOT"].savings_vs(simba["SRAM"]) <= 0.22
    assert 0.30 <= simba["P1-VGSOT"].savings_vs(simba["SRAM"]) <= 0.40

    eyeriss = compare_areas(get_architecture("eyeriss-like"), 7)
    assert eyeriss["SRAM"].total == pytest.approx(2.77, rel=0.15)
    assert 0.10 <= eyeriss["P0-VGSOT"].savings_vs(eyeriss["SRAM"]) <= 0.22
    assert 0.30 <= eyeriss["P1-VGSOT"].savings_vs(eyeriss["SRAM"]) <= 0.40


def test_sram_sized_cell_saves_nothing():
    library = default_library().with_bitcell_ratio(DeviceKind.VGSOT, 1.0)
    areas = compare_areas(get_architecture("simba-like"), 7, library=library)
    for est in areas.values():
        assert est.savings_vs(areas["SRAM"]) == pytest.approx(0.0)


def test_memory_only_drops_pe_array():
    simba = get_architecture("simba-like")
    asg = MemoryAssignment.build(simba, AssignmentVariant.SRAM_ONLY)
    full = total_area(simba, asg, 7)
    memory = total_area(simba, asg, 7, memory_only=True)
    assert memory.compute == 0.0
    assert full.compute == pytest.approx(256 * default_library().pe_area(7) / 1e6)
    assert full.total == pytest.approx(memory.total + full.compute)


def test_frames():
    estimates = []
    for name in ("eyeriss-like", "simba-like"):
        estimates.extend(compare_areas(get_architecture(name), 7).values())
    frame = area_frame(estimates)
    assert list(frame.columns) == ["arch", "variant", "level", "area_mm2"]
    assert "PE" in set(frame.level)

    summary = area_summary(estimates)
    assert list(summary.columns) == ["arch", "node_nm", "device", "sram_mm2", "p0_mm2",
                                     "p1_mm2", "p0_savings", "p1_savings"]
    assert list(summary.arch) == ["eyeriss-like", "simba-like"]
    assert (summary.p1_savings > summary.p0_savings).all()
