#!/usr/bin/env python3
"""
CLI tool for clipping-aware rescaling of perturbations
"""

import argparse
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import IO, Iterator, List, Optional
import logging

from pydantic import ValidationError

# Add the project root directory to Python path
sys.path.append(str(Path(__file__).parent))

from src.config.settings import LOG_LEVELS, get_settings
from src.models.domain import DomainBounds
from src.models.exceptions import RecordParseError
from src.models.records import InstanceDefaults, RecordStatus
from src.parsers import CsvRecordParser, JsonlRecordParser, ParsedRecord
from src.services import BenchmarkService, GradientService, NoiseService, NormService, SolveService
from src.utils.reporting import (
    bench_frame, format_bench_report, max_relative_disagreement, save_bench_excel, summarize_bench,
)
from src.utils.rng import NoiseDistribution, RecordRngFactory

logger = logging.getLogger('cli')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RECORD_FAILED = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@contextmanager
def open_output(path: Optional[str]) -> Iterator[IO[str]]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, 'w') as f:
            yield f


def read_records(args, default_delta_cols: Optional[str] = 'delta*') -> List[ParsedRecord]:
    """Read input records from --input or stdin in the selected --format"""
    if args.format == 'csv':
        delta_cols = args.delta_cols if args.delta_cols is not None else default_delta_cols
        parser = CsvRecordParser(args.x_cols, delta_cols)
        return parser.parse(args.input if args.input else sys.stdin)

    parser = JsonlRecordParser()
    if args.input:
        with open(args.input) as f:
            return parser.parse_stream(f)
    return parser.parse_stream(sys.stdin)


def build_defaults(args) -> InstanceDefaults:
    """Flag values, falling back to settings"""
    settings = get_settings()
    return InstanceDefaults(
        p=args.p if args.p is not None else settings.default_p,
        a=args.min if args.min is not None else settings.default_min,
        b=args.max if args.max is not None else settings.default_max,
        eps=args.eps,
        eta=getattr(args, 'eta', None),
    )


def write_results(results, parsed: List[ParsedRecord], output: Optional[str]) -> int:
    """Write one JSON line per result and work out the exit code"""
    with open_output(output) as out:
        for result in results:
            out.write(result.model_dump_json(exclude_none=True) + '\n')

    if any(not entry.ok for entry in parsed):
        return EXIT_USAGE
    failed = sum(1 for r in results if r.status != RecordStatus.OK)
    if failed:
        logger.warning(f"{failed} of {len(results)} records failed")
        return EXIT_RECORD_FAILED
    return EXIT_OK


def run_records(args, service, default_delta_cols: Optional[str] = 'delta*') -> int:
    try:
        parsed = read_records(args, default_delta_cols)
    except (RecordParseError, OSError) as e:
        logger.error(f"Could not read input: {str(e)}")
        return EXIT_USAGE
    results = service.process_all(parsed)
    return write_results(results, parsed, args.output)


def solve_command(args) -> int:
    """Solve eta for every record"""
    service = SolveService(build_defaults(args), emit_vector=args.emit_vector, workers=args.workers)
    return run_records(args, service)


def norm_command(args) -> int:
    """Evaluate the effective norm of every record at its eta"""
    return run_records(args, NormService(build_defaults(args), workers=args.workers))


def grad_command(args) -> int:
    """Emit partial derivatives of eta for every record"""
    tol = args.breakpoint_tol if args.breakpoint_tol is not None else get_settings().breakpoint_tol
    return run_records(args, GradientService(build_defaults(args), tol, workers=args.workers))


def noise_command(args) -> int:
    """Perturb every record with seeded noise of effective norm eps"""
    try:
        rng_factory = RecordRngFactory(args.seed)
    except ValueError as e:
        logger.error(f"Invalid seed: {str(e)}")
        return EXIT_USAGE
    if args.seed is None:
        print(f"seed: {rng_factory.seed}", file=sys.stderr)
    service = NoiseService(build_defaults(args), NoiseDistribution(args.dist), rng_factory, workers=args.workers)
    return run_records(args, service, default_delta_cols=None)


def bench_command(args) -> int:
    """Compare analytic and bisection solving on seeded random instances"""
    settings = get_settings()
    p = args.p if args.p is not None else settings.default_p
    a = args.min if args.min is not None else settings.default_min
    b = args.max if args.max is not None else settings.default_max
    try:
        service = BenchmarkService(
            n=args.n, batch=args.batch, p=p, trials=args.trials, seed=args.seed,
            tol=args.tol_bisect if args.tol_bisect is not None else settings.bisect_tol,
            max_iter=settings.bisect_max_iter,
            bounds=DomainBounds(a, b),
        )
    except ValueError as e:
        logger.error(f"Invalid benchmark parameters: {str(e)}")
        return EXIT_USAGE
    if args.seed is None:
        print(f"seed: {service.seed}", file=sys.stderr)

    records = service.run()
    if not records:
        logger.error("Bisection failed on every instance, nothing to report")
        return EXIT_RECORD_FAILED
    df = bench_frame(records)
    summary = summarize_bench(df)
    disagreement = max_relative_disagreement(df, 'analytic', 'bisect')

    if args.output:
        with open_output(args.output) as out:
            for record in records:
                out.write(record.model_dump_json() + '\n')
    if args.excel:
        save_bench_excel(df, summary, args.excel)

    if args.json:
        for record in records:
            sys.stdout.write(record.model_dump_json() + '\n')
    else:
        print(format_bench_report(summary, disagreement, args.n, p))

    totals = dict(zip(summary['method'], summary['total_nanos']))
    if totals.get('analytic', 0) >= totals.get('bisect', float('inf')):
        logger.warning("Analytic solving was not faster than bisection on this run")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = CliParser(description='Clipping-aware perturbation rescaling')
    parser.add_argument('--log-level', type=str.upper, choices=LOG_LEVELS,
                        help='Logging level (default from settings)')
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    # Options shared by every command
    instance_options = CliParser(add_help=False)
    instance_options.add_argument('--p', type=float, help='Norm order p >= 1 (default 2)')
    instance_options.add_argument('--min', type=float, help='Lower bound a of the data domain (default 0)')
    instance_options.add_argument('--max', type=float, help='Upper bound b of the data domain (default 1)')

    record_options = CliParser(add_help=False, parents=[instance_options])
    record_options.add_argument('--input', help='Input file (default stdin)')
    record_options.add_argument('--output', help='Output file (default stdout)')
    record_options.add_argument('--format', choices=['jsonl', 'csv'], default='jsonl', help='Input format')
    record_options.add_argument('--x-cols', default='x*', help="CSV columns holding x, names or a 'prefix*'")
    record_options.add_argument('--delta-cols', help="CSV columns holding delta (default 'delta*')")
    record_options.add_argument('--eps', type=float, help='Target norm for records without eps')
    record_options.add_argument('--workers', type=int, help='Parallel workers (default from settings)')

    solve_parser = subparsers.add_parser('solve', parents=[record_options], help='Solve eta per record')
    solve_parser.add_argument('--emit-vector', action='store_true', help='Include clip(x + eta * delta)')

    norm_parser = subparsers.add_parser('norm', parents=[record_options], help='Effective norm at a given eta')
    norm_parser.add_argument('--eta', type=float, help='Scale for records without eta')

    grad_parser = subparsers.add_parser('grad', parents=[record_options], help='Partial derivatives of eta')
    grad_parser.add_argument('--breakpoint-tol', type=float, help='Relative breakpoint detection tolerance')

    noise_parser = subparsers.add_parser('noise', parents=[record_options], help='Generate clipping-aware noise')
    noise_parser.add_argument('--dist', choices=[d.value for d in NoiseDistribution], default='gaussian',
                              help='Noise distribution')
    noise_parser.add_argument('--seed', type=int, help='Random seed (generated and printed if absent)')

    bench_parser = subparsers.add_parser('bench', parents=[instance_options], help='Analytic vs bisection timing')
    bench_parser.add_argument('--n', type=int, default=1000, help='Dimension of each instance')
    bench_parser.add_argument('--batch', type=int, default=1, help='Instances per trial')
    bench_parser.add_argument('--trials', type=int, default=5, help='Number of trials')
    bench_parser.add_argument('--seed', type=int, help='Random seed (generated and printed if absent)')
    bench_parser.add_argument('--tol-bisect', type=float, help='Bisection tolerance on the norm (default 1e-12)')
    bench_parser.add_argument('--output', help='Write per-solve JSON lines to this file')
    bench_parser.add_argument('--json', action='store_true', help='Print JSON lines instead of the table')
    bench_parser.add_argument('--excel', help='Also save the report as an Excel workbook')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ValidationError:
        return EXIT_USAGE
    logging.basicConfig(
        level=args.log_level or settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if args.command != 'bench' and args.workers is None:
        args.workers = settings.workers

    # Execute commands
    if args.command == 'solve':
        return solve_command(args)
    elif args.command == 'norm':
        return norm_command(args)
    elif args.command == 'grad':
        return grad_command(args)
    elif args.command == 'noise':
        return noise_command(args)
    elif args.command == 'bench':
        return bench_command(args)
    return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
