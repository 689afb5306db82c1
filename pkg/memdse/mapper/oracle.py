"""
Brute-force replay of the mapper schedules, one event at a time
"""
import logging
from collections import Counter

from ..arch.model import ArchitectureSpec, DataType, Dataflow
from ..errors import OracleGuardError, UnmappableLayerError
from ..utils import chunks
from ..workload.model import LayerKind, LayerSpec
from .mapper import row_stationary_tiling, weight_stationary_tiling
from .profile import AccessProfile, CountSheet, build_profile

logger = logging.getLogger(__name__)

MAX_DIM = 16

W, I, O = DataType.WEIGHTS, DataType.INPUTS, DataType.OUTPUTS


def _input_at(layer: LayerSpec, m, c, p, q, r, s):
    """Input element (channel, h, w) used by one MAC, or None if it lands in padding"""
    h = p * layer.stride - layer.padding + r
    w = q * layer.stride - layer.padding + s
    if 0 <= h < layer.in_h and 0 <= w < layer.in_w:
        return (layer.input_channel(m, c), h, w)
    return None


def _oracle_sequential(layer, arch, sheet):
    wl, il, ol = arch.inner(W).name, arch.inner(I).name, arch.inner(O).name
    macs = 0
    for m in range(layer.out_channels):
        for p in range(layer.out_h):
            for q in range(layer.out_w):
                for c in range(layer.reduction_channels):
                    for r in range(layer.kernel_r):
                        for s in range(layer.kernel_s):
                            sheet.read(wl, W)
                            sheet.read(il, I)
                            macs += 1
                sheet.write(ol, O)
    return macs, macs


def _oracle_row_stationary(layer, arch, sheet):
    t = row_stationary_tiling(layer, arch)
    wsp, isp, psp = arch.inner(W).name, arch.inner(I).name, arch.inner(O).name
    wglb, iglb, oglb = arch.backing(W).name, arch.backing(I).name, arch.backing(O).name
    S, Q = layer.kernel_s, layer.out_w
    depthwise = layer.kind is LayerKind.DEPTHWISE
    mgroups = [None] if depthwise else chunks(layer.out_channels, t.filter_tile)
    written = set()
    macs = cycles = 0
    for p0, np_ in chunks(layer.out_h, t.col_tile):
        for mg in mgroups:
            for c0, nc in chunks(layer.in_channels, t.row_groups * t.channel_tile):
                for r0, nr in chunks(layer.kernel_r, t.row_tile):
                    filters = set()
                    fetched = set()
                    outputs = set()
                    busiest = 0
                    for s0, ns in chunks(nc, t.channel_tile):
                        channels = range(c0 + s0, c0 + s0 + ns)
                        # (filter, reduction index) pairs resident in this PE
                        if depthwise:
                            work = [(c, 0) for c in channels]
                        else:
                            work = [(m, c) for m in range(mg[0], mg[0] + mg[1]) for c in channels]
                        for r in range(r0, r0 + nr):
                            for p in range(p0, p0 + np_):
                                pe_cycles = 0
                                for m, c in work:
                                    for s in range(S):
                                        filters.add((m, c, r, s))
                                        sheet.write(wsp, W)
                                row = set()
                                for m, c in work:
                                    for q in range(Q):
                                        for s in range(S):
                                            x = _input_at(layer, m, c, p, q, r, s)
                                            if x is not None:
                                                row.add(x)
                                sheet.write(isp, I, len(row))
                                fetched |= row
                                for q in range(Q):
                                    for m in sorted(set(m for m, _ in work)):
                                        sheet.read(psp, O)
                                        for mm, c in work:
                                            if mm != m:
                                                continue
                                            for s in range(S):
                                                sheet.read(wsp, W)
                                                sheet.read(isp, I)
                                                macs += 1
                                                pe_cycles += 1
                                        sheet.write(psp, O)
                                        outputs.add((m, p, q))
                                busiest = max(busiest, pe_cycles)
                    sheet.read(wglb, W, len(filters))
                    sheet.read(iglb, I, len(fetched))
                    for key in sorted(outputs):
                        if key in written:
                            sheet.read(oglb, O)
                        written.add(key)
                        sheet.write(oglb, O)
                    cycles += busiest
    return macs, cycles


def _check_fits(level, words: int) -> None:
    if words > level.words:
        raise UnmappableLayerError(level.name, words, level.words)


def _oracle_weight_stationary(layer, arch, sheet):
    t = weight_stationary_tiling(layer, arch)
    wbuf, ibuf, abuf = arch.inner(W), arch.inner(I), arch.inner(O)
    wglb, iglb, oglb = arch.backing(W).name, arch.backing(I).name, arch.backing(O).name
    R, S = layer.kernel_r, layer.kernel_s
    depthwise = layer.kind is LayerKind.DEPTHWISE
    accum = set()
    live = {}  # PE row -> partial sums not yet drained to the global buffer
    resident = None
    macs = cycles = 0
    ctiles = chunks(layer.reduction_channels, t.channel_tile)
    for m0, nm in chunks(layer.out_channels, t.col_tile):
        for q0, nq in chunks(layer.out_w, t.out_col_tile):
            qs = range(q0, q0 + nq)
            for ci, (c0, nc) in enumerate(ctiles):
                last = ci == len(ctiles) - 1
                tile = set()
                for m in range(m0, m0 + nm):
                    for c in range(c0, c0 + nc):
                        for r in range(R):
                            for s in range(S):
                                tile.add((m, c, r, s))
                _check_fits(wbuf, len(tile))
                if tile != resident:
                    sheet.read(wglb, W, len(tile))
                    for _ in range(t.row_tile):
                        sheet.write(wbuf.name, W, len(tile))
                    resident = tile
                for p0, np_ in chunks(layer.out_h, t.row_tile):
                    fetched = set()
                    for p in range(p0, p0 + np_):
                        # inputs multicast to this PE row's buffer
                        row_inputs = set()
                        for m in range(m0, m0 + nm):
                            for c in range(c0, c0 + nc):
                                for q in qs:
                                    for r in range(R):
                                        for s in range(S):
                                            x = _input_at(layer, m, c, p, q, r, s)
                                            if x is not None:
                                                row_inputs.add(x)
                        if depthwise:
                            _check_fits(ibuf, len(row_inputs))
                        else:
                            # channels stream through the row buffer one at a time
                            per_channel = Counter(x[0] for x in row_inputs)
                            _check_fits(ibuf, max(per_channel.values(), default=0))
                        sheet.write(ibuf.name, I, len(row_inputs))
                        fetched |= row_inputs
                        row = live.setdefault(p - p0, set())
                        for m in range(m0, m0 + nm):
                            for q in qs:
                                for c in range(c0, c0 + nc):
                                    for r in range(R):
                                        for s in range(S):
                                            sheet.read(wbuf.name, W)
                                            sheet.read(ibuf.name, I)
                                            macs += 1
                                if (m, p, q) in accum:
                                    sheet.read(abuf.name, O)
                                accum.add((m, p, q))
                                row.add((m, p, q))
                                sheet.write(abuf.name, O)
                        _check_fits(abuf, len(row))
                        if last:
                            done = {key for key in row if key[1] == p}
                            sheet.read(abuf.name, O, len(done))
                            sheet.write(oglb, O, len(done))
                            row -= done
                    sheet.read(iglb, I, len(fetched))
                    cycles += nq * nc * R * S
    return macs, cycles


_ORACLES = {
    Dataflow.SEQUENTIAL_CPU: _oracle_sequential,
    Dataflow.ROW_STATIONARY: _oracle_row_stationary,
    Dataflow.WEIGHT_STATIONARY: _oracle_weight_stationary,
}


def oracle_map_layer(layer: LayerSpec, arch: ArchitectureSpec) -> AccessProfile:
    """Event-by-event access counts; only for small layers"""
    too_big = {k: v for k, v in layer.dims().items() if v > MAX_DIM}
    if too_big:
        raise OracleGuardError(
            f"oracle limited to dimensions <= {MAX_DIM}: "
            + ", ".join(f"{k}={v}" for k, v in sorted(too_big.items())))
    sheet = CountSheet()
    macs, cycles = _ORACLES[arch.dataflow](layer, arch, sheet)
    return build_profile(arch, sheet, macs, cycles)
