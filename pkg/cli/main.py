"""
Command-line interface.

Subcommands write JSON (or CSV for point samples) to stdout or to --output.
Exit codes: 0 success, 1 usage, 2 numerical failure, 3 failed precondition,
4 geometric degeneracy.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from core.exceptions import ProjSpecError
from reports import DiagramGenerator, ReportGenerator
from utils.config_loader import get_config_value, load_config
from utils.log_setup import configure_logging
from utils.serialization import STDIO, load_functional, load_loop, load_tuple
import workflow

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

# Command-line threshold options and the config keys they override
THRESHOLD_OPTIONS = {
    'null_tol': 'equiv.null_tol',
    'verify_tol': 'spectrum.verify_tol',
    'period_tol': 'periods.tolerance',
    'central_tol': 'mcform.central_tol',
}


class UsageExitParser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _modulus(text: str) -> int:
    q = int(text)
    if q < 2:
        raise argparse.ArgumentTypeError("q must be at least 2")
    return q


def _count(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("count must be nonnegative")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(' ', ''))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    parser = UsageExitParser(
        prog='projspec',
        description='Projective spectra, Maurer-Cartan forms and periods of matrix tuples.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument('--config', default='config.yaml', help='YAML configuration file')
    parser.add_argument('--seed', type=int, default=None,
                        help='random seed (default: numerics.seed, overridden by PROJSPEC_SEED)')
    parser.add_argument('--tol', type=_positive, default=None,
                        help='membership tolerance on the normalized margin (default 1e-8)')
    parser.add_argument('--null-tol', type=_positive, default=None,
                        help='relative nullspace threshold of equiv (default: equiv.null_tol)')
    parser.add_argument('--verify-tol', type=_positive, default=None,
                        help='largest margin of a kept sample point (default: spectrum.verify_tol)')
    parser.add_argument('--period-tol', type=_positive, default=None,
                        help='target |I_N - I_2N| of period integrals (default: periods.tolerance)')
    parser.add_argument('--central-tol', type=_positive, default=None,
                        help='accepted centrality violation (default: mcform.central_tol)')
    parser.add_argument('--log-level', default=None, choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    parser.add_argument('--log-file', default=None, help='also write logs to this file')

    sub = parser.add_subparsers(dest='command', required=True, parser_class=UsageExitParser)

    det = sub.add_parser('det', help='interpolate det A(z)')
    det.add_argument('tuple', help="tuple JSON ('-' for stdin)")
    det.add_argument('-o', '--output', default=STDIO)

    sample = sub.add_parser('sample', help='sample the projective spectrum')
    sample.add_argument('tuple')
    sample.add_argument('--lines', type=_count, default=None, help='number of random lines')
    sample.add_argument('--chart', type=int, default=None, help='emit an affine slice in chart z_j = 1')
    sample.add_argument('--extent', type=_positive, default=2.0, help='half width of the slice grid')
    sample.add_argument('--method', choices=['pencil', 'polynomial'], default=None)
    sample.add_argument('--plot', default=None, help='also save a PNG diagram here')
    sample.add_argument('-o', '--output', default=STDIO)

    arrange = sub.add_parser('arrange', help='hyperplane arrangement of a commutative tuple')
    arrange.add_argument('tuple')
    arrange.add_argument('-o', '--output', default=STDIO)

    check = sub.add_parser('check-form', help='check the Maurer-Cartan identities at random points')
    check.add_argument('tuple')
    check.add_argument('functional')
    check.add_argument('--points', type=_count, default=None)
    check.add_argument('-o', '--output', default=STDIO)

    period = sub.add_parser('period', help='period of phi(omega) over a loop with certificate')
    period.add_argument('tuple')
    period.add_argument('functional')
    period.add_argument('loop')
    period.add_argument('-o', '--output', default=STDIO)

    eq = sub.add_parser('equiv', help='find U, V with U A_j V = B_j')
    eq.add_argument('tuple_a')
    eq.add_argument('tuple_b')
    eq.add_argument('--samples', type=_count, default=None, help='sample points (default 2(n+1))')
    eq.add_argument('-o', '--output', default=STDIO)

    demo = sub.add_parser('demo', help='finite models of the rotation and disk algebras')
    demo_sub = demo.add_subparsers(dest='demo', required=True, parser_class=UsageExitParser)
    rotation = demo_sub.add_parser('rotation', help='clock-shift pair of size q')
    rotation.add_argument('--q', type=_modulus, required=True)
    rotation.add_argument('--lines', type=_count, default=50)
    rotation.add_argument('-o', '--output', default=STDIO)
    table = demo_sub.add_parser('rotation-table', help='finite-q table for several q')
    table.add_argument('--qs', type=_modulus, nargs='+', required=True)
    table.add_argument('--lines', type=_count, default=20)
    table.add_argument('-o', '--output', default=STDIO)
    disk = demo_sub.add_parser('disk', help='membership of sum_j z_j w^j in the disk algebra')
    disk.add_argument('--coeffs', type=_complex, nargs='+', required=True)
    disk.add_argument('--ws', type=_complex, nargs='+', default=None,
                      help='evaluation points |w| <= 1 for the period profile')
    disk.add_argument('-o', '--output', default=STDIO)
    return parser


def _apply_overrides(config: dict, args: argparse.Namespace) -> dict:
    if args.seed is not None:
        config['numerics']['seed'] = args.seed
    if args.tol is not None:
        config['numerics']['membership_tol'] = args.tol
    if getattr(args, 'method', None):
        config['spectrum']['method'] = args.method
    for option, key in THRESHOLD_OPTIONS.items():
        value = getattr(args, option, None)
        if value is not None:
            section, name = key.split('.')
            config[section][name] = value
    return config


def run(args: argparse.Namespace, config: dict) -> None:
    reports = ReportGenerator(config)
    if args.command == 'det':
        reports.write_json(workflow.compute_det(load_tuple(args.tuple), config), args.output)

    elif args.command == 'sample':
        A = load_tuple(args.tuple)
        diagrams = DiagramGenerator(dpi=get_config_value(config, 'output.dpi', 150))
        if args.chart is not None:
            frame = workflow.sample_slice(A, args.chart, config, args.extent)
            if args.plot:
                diagrams.generate_slice_diagram(frame, title=A.label, output_path=args.plot)
        else:
            lines = args.lines if args.lines is not None else get_config_value(config, 'spectrum.lines', 50)
            frame = workflow.sample_cloud(A, lines, config)
            if args.plot and A.n_plus_1 >= 2:
                diagrams.generate_cloud_diagram(frame, title=A.label, output_path=args.plot)
        reports.write_csv(frame, args.output)

    elif args.command == 'arrange':
        reports.write_json(workflow.compute_arrangement(load_tuple(args.tuple), config), args.output)

    elif args.command == 'check-form':
        A = load_tuple(args.tuple)
        phi = load_functional(args.functional)
        reports.write_json(workflow.check_form(A, phi, args.points, config), args.output)

    elif args.command == 'period':
        A = load_tuple(args.tuple)
        report = workflow.compute_period(A, load_functional(args.functional), load_loop(args.loop), config)
        reports.write_json(report, args.output)

    elif args.command == 'equiv':
        A, B = load_tuple(args.tuple_a), load_tuple(args.tuple_b)
        reports.write_json(workflow.compute_equivalence(A, B, args.samples, config), args.output)

    elif args.command == 'demo':
        if args.demo == 'rotation':
            reports.write_json(workflow.run_rotation_demo(args.q, args.lines, config), args.output)
        elif args.demo == 'rotation-table':
            reports.write_csv(workflow.run_rotation_table(args.qs, args.lines, config), args.output)
        else:
            reports.write_json(workflow.run_disk_demo(args.coeffs, args.ws, config), args.output)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    config = load_config(args.config)
    configure_logging(args.log_level or get_config_value(config, 'logging.level', 'INFO'), args.log_file)
    config = _apply_overrides(config, args)

    try:
        run(args, config)
    except ProjSpecError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except np.linalg.LinAlgError as e:
        logger.error(f"LAPACK failure: {e}")
        return EXIT_NUMERICAL
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
