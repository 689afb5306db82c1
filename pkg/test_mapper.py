#!/usr/bin/env python3
"""
Test script for the analytic mapper against the brute-force oracle
"""
from dataclasses import replace
from functools import lru_cache
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from memdse.arch import ArchitectureSpec, DataType, get_architecture
from memdse.errors import OracleGuardError, UnmappableLayerError
from memdse.mapper import map_layer, map_network, oracle_map_layer
from memdse.mapper.mapper import weight_stationary_tiling
from memdse.workload import LayerKind, LayerSpec, NetworkDescriptor, bundled_network, mac_count, tensor_sizes

W, I, O = DataType.WEIGHTS, DataType.INPUTS, DataType.OUTPUTS


@lru_cache(maxsize=None)
def toy_arch(dataflow, rows=3, cols=3, local_bytes=16, psum_bytes=16, input_bytes=None):
    """Small array with one local buffer per datatype and a shared global buffer"""
    if input_bytes is None:
        input_bytes = local_bytes
    sharing = "PerPE" if dataflow == "RowStationary" else "PerRow"
    level = lambda name, held, cap, width=8, **kw: dict(
        name=name, held=held, capacity_bytes=cap, word_width=width, sharing=sharing,
        max_bandwidth=1, **kw)
    return ArchitectureSpec.from_dict({
        "name": f"toy-{dataflow}-{local_bytes}-{input_bytes}-{psum_bytes}",
        "pe_rows": rows, "pe_cols": cols, "dataflow": dataflow, "mac_precision": 8,
        "base_node": 40, "base_frequency_hz": 200e6,
        "levels": [
            level("wbuf", ["weights"], local_bytes),
            level("ibuf", ["inputs"], input_bytes),
            level("obuf", ["outputs"], psum_bytes, width=16),
            dict(name="glb", held=["weights", "inputs", "outputs"], capacity_bytes=65536,
                 word_width=8, sharing="Global", max_bandwidth=4, top=True),
        ],
    })


ARCHS = [toy_arch("RowStationary"), toy_arch("WeightStationary"), get_architecture("cpu")]


def with_capacity(arch, level, capacity):
    levels = tuple(replace(l, capacity=capacity) if l.name == level else l for l in arch.levels)
    return replace(arch, levels=levels)


def assert_same(analytic, oracle):
    assert analytic.counts == oracle.counts
    assert analytic.total_macs == oracle.total_macs
    assert analytic.cycles == oracle.cycles
    assert analytic.bandwidth_demand == oracle.bandwidth_demand


def geometry_layers():
    """Every spatial shape with H, W, R, S <= 8, stride <= 3 and padding below the kernel"""
    for h, w, stride in product(range(1, 9), range(1, 9), (1, 2, 3)):
        for r, s in product(range(1, h + 1), range(1, w + 1)):
            for pad in range(min(r, s)):
                yield LayerSpec(kind=LayerKind.CONV2D, in_channels=1, out_channels=1, in_h=h,
                                in_w=w, kernel_r=r, kernel_s=s, stride=stride, padding=pad)


def channel_layers():
    """Every kind with every channel count <= 8 on a padded 3x3 window"""
    for kind, c, m in product(LayerKind, range(1, 9), range(1, 9)):
        if kind is LayerKind.DEPTHWISE and m != c:
            continue
        if kind is LayerKind.FULLY_CONNECTED:
            yield LayerSpec(kind=kind, in_channels=c, out_channels=m)
        elif kind is LayerKind.POINTWISE:
            yield LayerSpec(kind=kind, in_channels=c, out_channels=m, in_h=4, in_w=3)
        else:
            yield LayerSpec(kind=kind, in_channels=c, out_channels=m, in_h=4, in_w=3,
                            kernel_r=3, kernel_s=3, stride=(c % 2) + 1, padding=1)


def sized_for(arch, layer):
    """The toy array with local buffers just large enough for the layer's kernel"""
    if arch.dataflow.value == "SequentialCPU":
        return arch
    return toy_arch(arch.dataflow.value, local_bytes=max(16, layer.kernel_r * layer.kernel_s))


GRID = list(geometry_layers()) + list(channel_layers())


@pytest.mark.parametrize("arch", ARCHS, ids=lambda a: a.dataflow.value)
def test_oracle_equivalence_exhaustive(arch):
    for layer in GRID:
        target = sized_for(arch, layer)
        assert_same(map_layer(layer, target), oracle_map_layer(layer, target))


@st.composite
def random_layers(draw):
    kind = draw(st.sampled_from(list(LayerKind)))
    c = draw(st.integers(1, 8))
    if kind is LayerKind.FULLY_CONNECTED:
        return LayerSpec(kind=kind, in_channels=c, out_channels=draw(st.integers(1, 8)))
    h, w = draw(st.integers(1, 8)), draw(st.integers(1, 8))
    r = 1 if kind is LayerKind.POINTWISE else draw(st.integers(1, min(h, 3)))
    s = 1 if kind is LayerKind.POINTWISE else draw(st.integers(1, min(w, 3)))
    m = c if kind is LayerKind.DEPTHWISE else draw(st.integers(1, 8))
    return LayerSpec(kind=kind, in_channels=c, out_channels=m, in_h=h, in_w=w,
                     kernel_r=r, kernel_s=s, stride=draw(st.integers(1, 2)),
                     padding=draw(st.integers(0, min(r, s) - 1)))


@settings(max_examples=200, deadline=None)
@given(random_layers(), st.sampled_from(ARCHS), st.sampled_from([9, 12, 16, 32]),
       st.sampled_from([3, 6, 9, 16, 64]), st.sampled_from([2, 4, 8, 16, 64]))
def test_oracle_equivalence_random(layer, arch, local_bytes, input_bytes, psum_bytes):
    if arch.dataflow.value != "SequentialCPU":
        arch = toy_arch(arch.dataflow.value, local_bytes=local_bytes, psum_bytes=psum_bytes,
                        input_bytes=input_bytes)
    try:
        analytic = map_layer(layer, arch)
    except UnmappableLayerError as e:
        with pytest.raises(UnmappableLayerError, match=e.level):
            oracle_map_layer(layer, arch)
        return
    assert_same(analytic, oracle_map_layer(layer, arch))


def test_sequential_fully_connected():
    cpu = get_architecture("cpu")
    fc = LayerSpec(kind=LayerKind.FULLY_CONNECTED, in_channels=2, out_channels=2)
    profile = map_layer(fc, cpu)
    assert profile.reads("weight_mem", W) == 4
    assert profile.reads("data_mem", I) == 4
    assert profile.writes("data_mem", O) == 2


def test_trivial_conv_on_cpu():
    cpu = get_architecture("cpu")
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=1, out_channels=1)
    profile = oracle_map_layer(layer, cpu)
    assert profile.reads("weight_mem", W) == 1
    assert profile.reads("data_mem", I) == 1
    assert profile.writes("data_mem", O) == 1


def test_depthwise_on_cpu_reads_one_weight_per_mac():
    cpu = get_architecture("cpu")
    dw = LayerSpec(kind=LayerKind.DEPTHWISE, in_channels=2, out_channels=2, in_h=4, in_w=4,
                   kernel_r=3, kernel_s=3)
    profile = oracle_map_layer(dw, cpu)
    assert profile.reads("weight_mem", W) == mac_count(dw) == 72


def test_toy_examples():
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=1, out_channels=1, in_h=4, in_w=4,
                      kernel_r=3, kernel_s=3)
    rs = toy_arch("RowStationary")
    assert_same(map_layer(layer, rs), oracle_map_layer(layer, rs))

    ws = toy_arch("WeightStationary")
    assert ws.inner(W).words >= 9
    assert map_layer(layer, ws).reads("glb", W) == 9


@given(random_layers())
def test_weight_stationary_fetches_weights_once(layer):
    profile = map_layer(layer, get_architecture("simba-like"))
    assert profile.reads("weight_glb", W) == tensor_sizes(layer).weight_words


CONSERVATION_ARCHS = ARCHS + [get_architecture(name) for name in ("eyeriss-like", "simba-like",
                                                                   "simba-v2")]


@settings(max_examples=500, deadline=None)
@given(random_layers(), st.sampled_from(CONSERVATION_ARCHS))
def test_every_mac_is_fed(layer, arch):
    """Innermost buffers deliver one weight and one input per MAC; every output lands once"""
    profile = map_layer(layer, arch)
    macs = mac_count(layer)
    assert profile.total_macs == macs
    assert profile.reads(arch.inner(W).name, W) >= macs
    assert profile.reads(arch.inner(I).name, I) >= macs
    assert profile.writes(arch.backing(O).name, O) >= tensor_sizes(layer).output_words


SHRINKING = {
    "local_bytes": [32, 16, 12, 9],
    "input_bytes": [64, 32, 16, 9, 6, 3],
    "psum_bytes": [128, 64, 32, 16, 8, 4, 2],
}


@pytest.mark.parametrize("buffer", sorted(SHRINKING))
@settings(max_examples=500, deadline=None)
@given(layer=random_layers())
def test_smaller_buffer_never_reduces_global_traffic(buffer, layer):
    previous = None
    for size in SHRINKING[buffer]:
        arch = toy_arch("WeightStationary", **{buffer: size})
        try:
            glb = map_layer(layer, arch).level_total("glb")
        except UnmappableLayerError:
            break
        if previous is not None:
            assert glb.reads >= previous.reads
            assert glb.writes >= previous.writes
        previous = glb


def test_unmappable_layer_reports_level():
    arch = toy_arch("WeightStationary", local_bytes=4)
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=1, out_channels=1, in_h=4, in_w=4,
                      kernel_r=3, kernel_s=3)
    with pytest.raises(UnmappableLayerError) as info:
        map_layer(layer, arch)
    assert info.value.level == "wbuf"
    assert info.value.required_words == 9

    net = NetworkDescriptor.standalone("one", [layer])
    with pytest.raises(UnmappableLayerError, match="layer 0"):
        map_network(net, arch)


def test_input_buffer_bounds_the_column_tile():
    simba = get_architecture("simba-like")
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=32, out_channels=32, in_h=64, in_w=64,
                      kernel_r=3, kernel_s=3, padding=1)
    narrow = with_capacity(simba, "input_buf", 64)
    assert weight_stationary_tiling(layer, simba).out_col_tile == 64
    assert weight_stationary_tiling(layer, narrow).out_col_tile == 19

    full, shrunk = map_layer(layer, simba), map_layer(layer, narrow)
    assert shrunk.reads("weight_glb", W) == full.reads("weight_glb", W) == \
        tensor_sizes(layer).weight_words
    assert shrunk.reads("glb", I) > full.reads("glb", I)

    with pytest.raises(UnmappableLayerError) as info:
        map_layer(layer, with_capacity(simba, "input_buf", 8))
    assert (info.value.level, info.value.required_words) == ("input_buf", 9)


def test_accumulator_bounds_the_column_tile():
    """Partial sums of both p-tiles stay live while three c-tiles cycle"""
    simba = get_architecture("simba-like")
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=128, out_channels=16, in_h=32, in_w=32,
                      kernel_r=3, kernel_s=3, padding=1)
    small = with_capacity(simba, "accum_buf", 320)
    assert small.inner(O).words == 128
    tiling = weight_stationary_tiling(layer, small)
    assert (tiling.channel_tile, tiling.out_col_tile, tiling.col_tile) == (56, 4, 16)

    weights = tensor_sizes(layer).weight_words
    assert map_layer(layer, simba).reads("weight_glb", W) == weights
    assert map_layer(layer, small).reads("weight_glb", W) == 8 * weights

    with pytest.raises(UnmappableLayerError, match="accum_buf"):
        map_layer(layer, with_capacity(simba, "accum_buf", 4))


def test_pooled_fully_connected_handoff():
    arch = get_architecture("simba-like")
    conv = LayerSpec(kind=LayerKind.CONV2D, in_channels=3, out_channels=4, in_h=4, in_w=4,
                     kernel_r=3, kernel_s=3, padding=1)
    fc = LayerSpec(kind=LayerKind.FULLY_CONNECTED, in_channels=4, out_channels=2,
                   pooled_positions=16)
    result = map_network(NetworkDescriptor(name="pooled", layers=(conv, fc)), arch)
    act = arch.activation_level.name
    per_layer = sum(p.get(act, I).writes for p in result.layers)
    assert result.total.get(act, I).writes - per_layer == 4 * 16


def test_oracle_guard():
    big = LayerSpec(kind=LayerKind.FULLY_CONNECTED, in_channels=32, out_channels=2)
    with pytest.raises(OracleGuardError):
        oracle_map_layer(big, get_architecture("cpu"))


def test_single_layer_network_matches_layer():
    arch = get_architecture("simba-like")
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=4, out_channels=4, in_h=6, in_w=6,
                      kernel_r=3, kernel_s=3, padding=1)
    net = NetworkDescriptor(name="one", layers=(layer,))
    total = map_network(net, arch).total
    assert total.counts == map_layer(layer, arch).counts


def test_chained_layers_add_one_handoff():
    arch = get_architecture("eyeriss-like")
    layer = LayerSpec(kind=LayerKind.CONV2D, in_channels=4, out_channels=4, in_h=6, in_w=6,
                      kernel_r=3, kernel_s=3, padding=1)
    single = map_layer(layer, arch)
    result = map_network(NetworkDescriptor(name="two", layers=(layer, layer)), arch)
    handoff = tensor_sizes(layer).input_words
    act = arch.activation_level.name
    assert len(result.layers) == 2
    for key in set(single.counts) | {(act, I)}:
        expected = single.get(*key).scaled(2)
        if key == (act, I):
            expected = expected + type(expected)(handoff, handoff)
        assert result.total.get(*key) == expected
    assert result.total.cycles == 2 * single.cycles
    assert result.total.total_macs == 2 * single.total_macs


def test_row_stationary_refetches_weights_more_than_weight_stationary():
    net = bundled_network("detnet")
    eyeriss = map_network(net, get_architecture("eyeriss-like")).total
    simba = map_network(net, get_architecture("simba-like")).total
    assert eyeriss.reads("weight_glb", W) >= simba.reads("weight_glb", W)
    assert simba.reads("weight_glb", W) == sum(tensor_sizes(l).weight_words for l in net.layers)


def test_utilization_counts_partial_tiles():
    arch = get_architecture("simba-like")
    full = LayerSpec(kind=LayerKind.POINTWISE, in_channels=16, out_channels=16, in_h=16, in_w=16)
    ragged = LayerSpec(kind=LayerKind.POINTWISE, in_channels=16, out_channels=17, in_h=17, in_w=16)
    assert map_layer(full, arch).utilization == pytest.approx(1.0)
    assert map_layer(ragged, arch).utilization < 1.0


def test_profile_frame_lists_nonzero_counts():
    profile = map_layer(LayerSpec(kind=LayerKind.FULLY_CONNECTED, in_channels=2, out_channels=2),
                        get_architecture("cpu"))
    frame = profile.to_frame()
    assert list(frame.columns) == ["level", "datatype", "reads", "writes"]
    assert len(frame) == 3
    assert profile.to_csv().startswith("level,datatype,reads,writes\n")
