"""
Analytic loop-nest mapper: access counts per level for one fixed schedule per dataflow

RowStationary: PE rows hold (channel slice, filter row) pairs, PE columns hold output
rows. Each PE packs several filters and channels as its scratchpads allow. Loop order
p-tile, filter group, channel group, filter-row tile.

WeightStationary: PE rows hold output rows, PE columns hold output channels.
Loop order m-tile, q-tile, c-tile, p-tile; the weight tile stays resident across p-tiles.
Inputs stream through each PE row one channel at a time; output columns are tiled so
the channel window and the live partial sums fit the row's buffers.

SequentialCPU: m, p, q outer, reduction innermost in an accumulator register.
"""
import logging
from typing import List, NamedTuple

from ..arch.model import ArchitectureSpec, DataType, Dataflow, Sharing
from ..errors import ArchitectureError, UnmappableLayerError, WorkloadValidationError
from ..utils import ceil_div, chunks, covered_positions
from ..workload.model import LayerKind, LayerSpec, NetworkDescriptor, mac_count, tensor_sizes
from .profile import AccessProfile, CountSheet, build_profile, sum_profiles

logger = logging.getLogger(__name__)

W, I, O = DataType.WEIGHTS, DataType.INPUTS, DataType.OUTPUTS


class NetworkProfile(NamedTuple):
    total: AccessProfile
    layers: List[AccessProfile]


def in_rows(layer: LayerSpec, p: int, r0: int, nr: int) -> List[int]:
    """In-bounds input rows used by output row p and filter rows r0..r0+nr"""
    base = p * layer.stride - layer.padding
    return [base + r for r in range(r0, r0 + nr) if 0 <= base + r < layer.in_h]


def used_columns(layer: LayerSpec) -> int:
    """In-bounds input columns touched by a full output row"""
    return covered_positions(layer.in_w, range(layer.out_w), layer.kernel_s,
                             layer.stride, layer.padding)


def _require_local(arch: ArchitectureSpec) -> None:
    for dt in DataType:
        if arch.inner(dt).sharing is Sharing.GLOBAL:
            raise ArchitectureError(
                f"{arch.name}: {arch.dataflow.value} needs a local {dt.value} buffer")


# --- row stationary ------------------------------------------------------------

class RowStationaryTiling(NamedTuple):
    row_tile: int  # filter rows per PE-row block (R_t)
    row_groups: int  # channel slices stacked down the PE rows
    col_tile: int  # output rows across PE columns (P_t)
    channel_tile: int  # channels packed in one PE
    filter_tile: int  # filters packed in one PE (1 for depthwise)


def row_stationary_tiling(layer: LayerSpec, arch: ArchitectureSpec) -> RowStationaryTiling:
    _require_local(arch)
    S = layer.kernel_s
    wsp, isp, psp = arch.inner(W), arch.inner(I), arch.inner(O)
    for spad in (wsp, isp):
        if spad.words < S:
            raise UnmappableLayerError(spad.name, S, spad.words)
    r_t = min(layer.kernel_r, arch.pe_rows)
    groups = max(1, arch.pe_rows // r_t)
    spread = ceil_div(layer.in_channels, groups)
    if layer.kind is LayerKind.DEPTHWISE:
        m_pe = 1
        c_pe = min(spread, wsp.words // S, isp.words // S, psp.words)
    else:
        m_pe = min(layer.out_channels, psp.words, wsp.words // S)
        c_pe = min(spread, wsp.words // (m_pe * S), isp.words // S)
    return RowStationaryTiling(row_tile=r_t, row_groups=groups,
                               col_tile=min(layer.out_h, arch.pe_cols),
                               channel_tile=c_pe, filter_tile=m_pe)


def _map_row_stationary(layer: LayerSpec, arch: ArchitectureSpec) -> AccessProfile:
    t = row_stationary_tiling(layer, arch)
    Q, S = layer.out_w, layer.kernel_s
    depthwise = layer.kind is LayerKind.DEPTHWISE
    n_cols = used_columns(layer)
    rtiles = chunks(layer.kernel_r, t.row_tile)
    cgroups = chunks(layer.in_channels, t.row_groups * t.channel_tile)
    # depthwise: each channel is its own filter, so channel groups are also output groups
    mgroups = [(0, 1)] if depthwise else chunks(layer.out_channels, t.filter_tile)
    passes_per_output = len(rtiles) * (1 if depthwise else len(cgroups))

    wsp, isp, psp = arch.inner(W).name, arch.inner(I).name, arch.inner(O).name
    wglb, iglb, oglb = arch.backing(W).name, arch.backing(I).name, arch.backing(O).name
    sheet = CountSheet()
    cycles = 0
    for p0, np_ in chunks(layer.out_h, t.col_tile):
        for r0, nr in rtiles:
            rows = [h for p in range(p0, p0 + np_) for h in in_rows(layer, p, r0, nr)]
            distinct = len(set(rows))
            for _, nc in cgroups:
                n_slices = ceil_div(nc, t.channel_tile)
                widest = min(nc, t.channel_tile)
                for _, nm in mgroups:
                    # filters resident per PE: nm (conv) or one per packed channel (depthwise)
                    pairs = nc * nm
                    psums = nc if depthwise else n_slices * nm
                    macs = pairs * nr * np_ * Q * S
                    sheet.read(wsp, W, macs)
                    sheet.write(wsp, W, pairs * nr * np_ * S)
                    sheet.read(wglb, W, pairs * nr * S)
                    sheet.read(isp, I, macs)
                    sheet.write(isp, I, nc * len(rows) * n_cols)
                    sheet.read(iglb, I, nc * distinct * n_cols)
                    sheet.read(psp, O, psums * nr * np_ * Q)
                    sheet.write(psp, O, psums * nr * np_ * Q)
                    outs = (nc if depthwise else nm) * np_ * Q
                    sheet.write(oglb, O, outs)
                    cycles += Q * S * widest * (1 if depthwise else nm)
        # every pass after the first for an output reads its partial sum back
        sheet.read(oglb, O, (passes_per_output - 1) * layer.out_channels * np_ * Q)
    return build_profile(arch, sheet, mac_count(layer), cycles)


# --- weight stationary ---------------------------------------------------------

class WeightStationaryTiling(NamedTuple):
    row_tile: int  # output rows across PE rows (P_t)
    col_tile: int  # output channels across PE columns (M_t)
    channel_tile: int  # reduction channels per weight residency (c_t)
    out_col_tile: int  # output columns per input/accumulator residency (Q_t)


def _input_span(layer: LayerSpec, q_t: int) -> int:
    """Input columns under q_t adjacent output columns"""
    return min(layer.in_w, (q_t - 1) * layer.stride + layer.kernel_s)


def weight_stationary_tiling(layer: LayerSpec, arch: ArchitectureSpec) -> WeightStationaryTiling:
    """
    Tile sizes for the weight-stationary schedule.

    Each tile dimension only shrinks when a buffer shrinks: filters per column and
    channels per residency follow the weight buffer, the output-column tile follows
    the input buffer, and the accumulators bound both against the nominal filter width.
    """
    _require_local(arch)
    wbuf, ibuf, abuf = arch.inner(W), arch.inner(I), arch.inner(O)
    R = layer.kernel_r
    kernel = R * layer.kernel_s
    if kernel > wbuf.words:
        raise UnmappableLayerError(wbuf.name, kernel, wbuf.words)
    p_t = min(layer.out_h, arch.pe_rows)
    m_nominal = min(layer.out_channels, arch.pe_cols)
    m_t = min(m_nominal, wbuf.words // kernel)

    # input buffer: R rows x column span of one channel per PE row
    column = R * _input_span(layer, 1)
    if column > ibuf.words:
        raise UnmappableLayerError(ibuf.name, column, ibuf.words)
    q_t = layer.out_w
    while q_t > 1 and R * _input_span(layer, q_t) > ibuf.words:
        q_t -= 1

    if layer.kind is LayerKind.DEPTHWISE:
        # every column works on its own channel
        q_t = min(q_t, abuf.words)
        m_t = min(m_t, ibuf.words // (R * _input_span(layer, q_t)), abuf.words // q_t)
        return WeightStationaryTiling(row_tile=p_t, col_tile=m_t, channel_tile=1, out_col_tile=q_t)

    c_t = min(layer.reduction_channels, wbuf.words // (m_t * kernel))
    # partial sums of every p-tile stay live while c-tiles cycle
    depth = ceil_div(layer.out_h, p_t) if c_t < layer.reduction_channels else 1
    if depth > abuf.words:
        raise UnmappableLayerError(abuf.name, depth, abuf.words)
    q_t = min(q_t, max(1, abuf.words // (m_nominal * depth)))
    m_t = min(m_t, abuf.words // (q_t * depth))
    return WeightStationaryTiling(row_tile=p_t, col_tile=m_t, channel_tile=c_t, out_col_tile=q_t)


def _map_weight_stationary(layer: LayerSpec, arch: ArchitectureSpec) -> AccessProfile:
    t = weight_stationary_tiling(layer, arch)
    R, S = layer.kernel_r, layer.kernel_s
    depthwise = layer.kind is LayerKind.DEPTHWISE

    # per p-tile input rows: sum over PE rows, and the multicast union
    ptiles = []
    for p0, np_ in chunks(layer.out_h, t.row_tile):
        per_row = [in_rows(layer, p, 0, R) for p in range(p0, p0 + np_)]
        union = set(h for hs in per_row for h in hs)
        ptiles.append((np_, sum(len(hs) for hs in per_row), len(union)))

    wbuf, ibuf, abuf = arch.inner(W).name, arch.inner(I).name, arch.inner(O).name
    wglb, iglb, oglb = arch.backing(W).name, arch.backing(I).name, arch.backing(O).name
    sheet = CountSheet()
    cycles = 0
    ctiles = chunks(layer.reduction_channels, t.channel_tile)
    for _, nm in chunks(layer.out_channels, t.col_tile):
        for qi, (q0, nq) in enumerate(chunks(layer.out_w, t.out_col_tile)):
            n_cols = covered_positions(layer.in_w, range(q0, q0 + nq), S, layer.stride,
                                       layer.padding)
            for ci, (_, nc) in enumerate(ctiles):
                tile = nm * nc * R * S
                # a lone c-tile stays resident across q-tiles
                if qi == 0 or len(ctiles) > 1:
                    sheet.read(wglb, W, tile)
                    sheet.write(wbuf, W, tile * t.row_tile)
                n_ch = nm if depthwise else nc
                for np_, row_loads, union in ptiles:
                    macs = np_ * nm * nq * nc * R * S
                    outs = np_ * nm * nq
                    sheet.read(wbuf, W, macs)
                    sheet.read(ibuf, I, macs)
                    sheet.write(ibuf, I, n_ch * row_loads * n_cols)
                    sheet.read(iglb, I, n_ch * union * n_cols)
                    sheet.write(abuf, O, outs)
                    if ci > 0:
                        sheet.read(abuf, O, outs)
                    if ci == len(ctiles) - 1:
                        sheet.read(abuf, O, outs)
                        sheet.write(oglb, O, outs)
                    cycles += nq * nc * R * S
    return build_profile(arch, sheet, mac_count(layer), cycles)


# --- sequential cpu ------------------------------------------------------------

def _map_sequential(layer: LayerSpec, arch: ArchitectureSpec) -> AccessProfile:
    macs = mac_count(layer)
    sheet = CountSheet()
    sheet.read(arch.inner(W).name, W, macs)
    sheet.read(arch.inner(I).name, I, macs)
    sheet.write(arch.inner(O).name, O, tensor_sizes(layer).output_words)
    return build_profile(arch, sheet, macs, macs)


_SCHEDULES = {
    Dataflow.ROW_STATIONARY: _map_row_stationary,
    Dataflow.WEIGHT_STATIONARY: _map_weight_stationary,
    Dataflow.SEQUENTIAL_CPU: _map_sequential,
}


def map_layer(layer: LayerSpec, arch: ArchitectureSpec) -> AccessProfile:
    """Access profile of one layer under the architecture's dataflow"""
    return _SCHEDULES[arch.dataflow](layer, arch)


def map_network(net: NetworkDescriptor, arch: ArchitectureSpec) -> NetworkProfile:
    """Sum of per-layer profiles plus one write+read per activation hand-off"""
    layers = []
    handoff = CountSheet()
    act = arch.activation_level.name
    for i, layer in enumerate(net.layers):
        try:
            profile = map_layer(layer, arch)
        except UnmappableLayerError as e:
            raise UnmappableLayerError(e.level, e.required_words, e.available_words,
                                       layer_index=i) from e
        except WorkloadValidationError as e:
            raise WorkloadValidationError(str(e), i) from e
        layers.append(profile)
        if net.sources[i] is not None:
            # a pooled FullyConnected reads the producer's whole spatial output
            words = tensor_sizes(layer).input_words * layer.pooled_positions
            handoff.write(act, I, words)
            handoff.read(act, I, words)
        logger.debug(f"{net.name}[{i}] {layer.name or layer.kind.value}: "
                     f"{profile.total_macs} MACs, {profile.cycles} cycles on {arch.name}")

    total = sum_profiles(arch, layers, extra=handoff)
    logger.info(f"Mapped {net.name} on {arch.name}: {total.total_macs} MACs, "
                f"{total.cycles} cycles, utilization {total.utilization:.3f}")
    return NetworkProfile(total=total, layers=layers)
