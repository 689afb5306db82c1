"""
Main entry point for memdse
"""
import argparse
import logging
import shutil
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .area.model import area_frame, area_summary, compare_areas
from .arch.builtins import builtin_architectures, dump_architectures, get_architecture, is_v2
from .arch.model import AssignmentVariant, Dataflow
from .config import config
from .duty_cycle.model import crossover_frame, curve_frame, power_curve
from .duty_cycle.scenario import build_scenario
from .errors import MemdseError
from .report.scenario import Scenario, arch_source, run_scenario, run_sweep, sweep_grid
from .report.tables import (area_table, crossover_table, energy_table, latency_savings_table,
                            level_table)
from .report.writer import merge_metadata, write_table
from .technology.devices import DeviceKind, MRAM_KINDS
from .technology.library import default_library, load_tech_library
from .utils import file_sha256, setup_logging
from .workload.loader import bundled_network, bundled_network_names, network_path

logger = logging.getLogger(__name__)


def _workloads(args) -> List[str]:
    return [args.workload] if args.workload else bundled_network_names()


def _archs(args, systolic_only: bool = False, pe_config: str = 'base') -> List[str]:
    if args.arch:
        return [args.arch]
    pe_config = args.pe_config or pe_config
    return [name for name, arch in builtin_architectures().items()
            if not (systolic_only and arch.dataflow is Dataflow.SEQUENTIAL_CPU)
            and (pe_config == 'all' or is_v2(name) == (pe_config == 'v2'))]


def _nodes(args, default: List[int]) -> List[int]:
    return list(args.node) if args.node else default


def _ips_min(args, workload: str) -> float:
    if args.ips_min is not None:
        return args.ips_min
    meta = bundled_network(workload).metadata
    return float(meta.get('ips_min', config.sweep.default_ips_min))


def _base_scenario(args, workload: str, arch: str, node: int) -> Scenario:
    variant = AssignmentVariant.parse(args.variant)
    device = DeviceKind.parse(args.device) if args.device else DeviceKind.VGSOT
    if not device.is_nvm:
        if variant is not AssignmentVariant.SRAM_ONLY:
            raise MemdseError(f"--variant {args.variant} needs an MRAM device")
        device = DeviceKind.VGSOT
    return Scenario(workload=workload, arch=arch, variant=variant, device=device, node=node,
                    ips_min=_ips_min(args, workload), memory_only=args.memory_only,
                    tech=args.tech)


def _out_dir(args) -> Path:
    return Path(args.out or config.output.out_dir)


def map_command(args) -> int:
    """Per-level access counts and bandwidth demand"""
    try:
        written = 0
        for workload in _workloads(args):
            for arch in _archs(args):
                scenario = _base_scenario(args, workload, arch, _nodes(args, [7])[0])
                report = run_scenario(scenario)
                total = report.profile.total
                logger.info(f"{report.network} on {report.arch.name}: {total.total_macs} MACs, "
                            f"{total.cycles} cycles, utilization {total.utilization:.1%}")
                write_table(level_table(report), _out_dir(args), f"map_{scenario.key}",
                            report.metadata, args.format)
                written += 1
        return 0 if written else 1
    except Exception as e:
        logger.error(f"Mapping failed: {e}")
        return 1


def _run_grid(args, variants, devices, nodes, systolic_only=False, pe_config='base'):
    points = []
    for workload in _workloads(args):
        for arch in _archs(args, systolic_only, pe_config):
            base = _base_scenario(args, workload, arch, nodes[0])
            points.extend(sweep_grid(base, variants, devices, nodes))
    return run_sweep(points)


def energy_command(args) -> int:
    """SramOnly, P0 and P1 energy per architecture on two nodes"""
    try:
        devices = [DeviceKind.parse(args.device)] if args.device else [DeviceKind.VGSOT]
        devices = [d for d in devices if d.is_nvm] or [DeviceKind.VGSOT]
        result = _run_grid(args, tuple(AssignmentVariant), devices, _nodes(args, [28, 7]))
        if result.reports:
            meta = merge_metadata(r.metadata for r in result.reports)
            write_table(energy_table(result.reports), _out_dir(args), 'energy', meta, args.format)
        return 0 if result.ok else 1
    except Exception as e:
        logger.error(f"Energy analysis failed: {e}")
        return 1


def latency_command(args) -> int:
    """P0/P1 latency and memory power savings at ips_min"""
    try:
        args.variant = 'sram'
        device = [DeviceKind.parse(args.device)] if args.device else [DeviceKind.VGSOT]
        result = _run_grid(args, (AssignmentVariant.SRAM_ONLY,), device, _nodes(args, [7]),
                           systolic_only=True, pe_config='v2')
        if result.reports:
            meta = merge_metadata(r.metadata for r in result.reports)
            table = latency_savings_table(result.reports)
            write_table(table, _out_dir(args), 'latency_savings', meta, args.format)
            for row in table.itertuples(index=False):
                logger.info(f"{row.workload} on {row.arch}: P0 {row.latency_p0_ms:.4g} ms "
                            f"saves {row.savings_p0:+.1%}, P1 {row.latency_p1_ms:.4g} ms "
                            f"saves {row.savings_p1:+.1%}")
        return 0 if result.ok else 1
    except Exception as e:
        logger.error(f"Latency analysis failed: {e}")
        return 1


def area_command(args) -> int:
    """Area of SramOnly, P0 and P1 per architecture"""
    try:
        library = load_tech_library(args.tech) if args.tech else default_library()
        devices = [DeviceKind.parse(args.device)] if args.device else [DeviceKind.VGSOT]
        devices = [d for d in devices if d.is_nvm] or [DeviceKind.VGSOT]
        node = library.check_node(_nodes(args, [7])[0])
        estimates = []
        for name in _archs(args, systolic_only=True):
            arch = get_architecture(name)
            estimates.extend(compare_areas(arch, node, devices, library, args.memory_only).values())
        meta = {'schema': str(config.data.schema_version), 'version': __version__,
                'tech_sha256': library.sha256,
                'arch_sha256': file_sha256(arch_source(args.arch) if args.arch
                                              else config.data.arch_path)}
        summary = area_summary(estimates)
        write_table(summary, _out_dir(args), 'area_summary', meta, args.format)
        write_table(area_frame(estimates), _out_dir(args), 'area_levels', meta, args.format)
        for row in summary.itertuples(index=False):
            logger.info(f"{row.arch}: SRAM {row.sram_mm2:.3f} mm2, P0 saves {row.p0_savings:.1%}, "
                        f"P1 saves {row.p1_savings:.1%}")
        return 0
    except Exception as e:
        logger.error(f"Area analysis failed: {e}")
        return 1


def ips_sweep_command(args) -> int:
    """Memory power versus ips, one file per architecture, workload and NVM variant"""
    try:
        devices = [DeviceKind.parse(args.device)] if args.device else list(MRAM_KINDS)
        devices = [d for d in devices if d.is_nvm] or list(MRAM_KINDS)
        args.variant = 'sram'
        failed = 0
        for workload in _workloads(args):
            for arch_name in _archs(args, systolic_only=True):
                try:
                    base = _base_scenario(args, workload, arch_name, _nodes(args, [7])[0])
                    report = run_scenario(base)
                    library = base.library()
                    duty = build_scenario(report.profile.total, report.arch, base.node,
                                          devices=devices, ips_min=base.ips_min, library=library)
                    curve = power_curve(duty)
                except MemdseError as e:
                    logger.error(f"{workload} on {arch_name}: {e}")
                    failed += 1
                    continue
                labels = {duty.sram.label: 'SRAM'}
                labels.update({label: label.split('-', 1)[1] for label in duty.nvm})
                frame = curve_frame(curve, labels)
                for variant in (AssignmentVariant.P0, AssignmentVariant.P1):
                    keep = [duty.sram.label] + [l for l in duty.nvm if l.startswith(variant.name)]
                    part = frame[frame['variant'].isin(keep)].reset_index(drop=True)
                    write_table(part, _out_dir(args),
                                f"ips_{report.network}_{report.arch.name}_{variant.name.lower()}",
                                report.metadata, args.format)
                xo = crossover_frame(duty, curve)
                write_table(xo, _out_dir(args), f"crossover_{report.network}_{report.arch.name}",
                            report.metadata, args.format)
        return 0 if not failed else 1
    except Exception as e:
        logger.error(f"IPS sweep failed: {e}")
        return 1


def report_command(args) -> int:
    """Everything for the selected workloads and architectures"""
    try:
        variants = (tuple(AssignmentVariant) if args.variant == 'sram'
                    else (AssignmentVariant.SRAM_ONLY, AssignmentVariant.parse(args.variant)))
        devices = [DeviceKind.parse(args.device)] if args.device else [DeviceKind.VGSOT]
        devices = [d for d in devices if d.is_nvm] or [DeviceKind.VGSOT]
        args.variant = 'sram'
        result = _run_grid(args, variants, devices, _nodes(args, [7]))
        out = _out_dir(args)
        if result.reports:
            meta = merge_metadata(r.metadata for r in result.reports)
            write_table(energy_table(result.reports), out, 'energy', meta, args.format)
            write_table(latency_savings_table(result.reports), out, 'latency_savings', meta,
                        args.format)
            write_table(area_table(result.reports), out, 'area_summary', meta, args.format)
            for r in result.reports:
                write_table(level_table(r), out, f"levels_{r.scenario.key}", r.metadata,
                            args.format)
                if r.scenario.variant is AssignmentVariant.SRAM_ONLY and r.duty is not None:
                    write_table(crossover_table(r), out, f"crossover_{r.scenario.key}",
                                r.metadata, args.format)
        for point, error in result.errors:
            logger.error(f"{point.key}: {error}")
        return 0 if result.ok else 1
    except Exception as e:
        logger.error(f"Report failed: {e}")
        return 1


def dump_builtins_command(args) -> int:
    """Copy the bundled data files out for editing"""
    try:
        out = _out_dir(args)
        dump_architectures(out / 'architectures.json')
        shutil.copyfile(config.data.tech_path, out / 'tech.json')
        (out / 'networks').mkdir(parents=True, exist_ok=True)
        for name in bundled_network_names():
            shutil.copyfile(network_path(name), out / 'networks' / f"{name}.json")
        logger.info(f"Bundled data written to {out}")
        return 0
    except Exception as e:
        logger.error(f"Dump failed: {e}")
        return 1


COMMANDS = {
    'map': (map_command, 'Per-level access counts and bandwidth demand'),
    'energy': (energy_command, 'Energy per variant and node'),
    'latency': (latency_command, 'P0/P1 latency and power savings at ips_min'),
    'area': (area_command, 'Silicon area and savings per variant'),
    'ips-sweep': (ips_sweep_command, 'Memory power versus inference rate'),
    'report': (report_command, 'All analyses for a scenario grid'),
    'dump-builtins': (dump_builtins_command, 'Write bundled data files for editing'),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--workload', help='Bundled network name or JSON path (default: all)')
    common.add_argument('--arch', help='Builtin architecture name or JSON path (default: all)')
    common.add_argument('--variant', choices=['sram', 'p0', 'p1'], default='sram')
    common.add_argument('--device', choices=['sram', 'stt', 'sot', 'vgsot'])
    common.add_argument('--node', type=int, nargs='+', help='Technology node(s) in nm')
    common.add_argument('--ips-min', type=float, help='Application inference rate floor')
    common.add_argument('--tech', help='Technology file (default: MEMDSE_TECH or bundled)')
    common.add_argument('--format', choices=['csv', 'md'], default=config.output.default_format)
    common.add_argument('--out', help='Output directory')
    common.add_argument('--pe-config', choices=['base', 'v2', 'all'],
                        help='Builtin PE arrays to run when --arch is not given '
                             '(default: v2 for latency, base otherwise)')
    common.add_argument('--memory-only', action='store_true', help='Exclude PE area')
    common.add_argument('--seed', type=int, default=0, help='Reserved; the model is deterministic')

    parser = argparse.ArgumentParser(description="Memory design-space exploration for edge-AI accelerators")
    parser.add_argument(
        '--log-level',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
        default=config.log.level,
        help='Set logging level'
    )
    subparsers = parser.add_subparsers(dest='command', help='Available commands')
    for name, (_, help_text) in COMMANDS.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.log_level)
    if getattr(args, 'seed', 0):
        logger.debug(f"--seed {args.seed} ignored; results are deterministic")

    if args.command not in COMMANDS:
        parser.print_help()
        return 1
    return COMMANDS[args.command][0](args)


if __name__ == "__main__":
    sys.exit(main())
