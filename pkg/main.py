"""
Hypertoric Duality Engine - Main CLI Application
Command-line interface for running the duality checks on an arrangement
"""

import argparse
import json
import logging
import random
import sys
from typing import Any, Dict, List, Optional, Tuple

from pydantic import ValidationError as SchemaError

from cache import ReportCache, document_hash
from config import CALIBRATION, DEFAULT_Q_ORDER, DEFAULT_SEED, EXPORT_FORMATS, LOG_FILE, LOG_LEVEL
from elliptic_interface import check_restriction_commutes
from exporter import ReportExporter
from hypertoric_data import PRESETS, HypertoricData, gale_dual, require_valid, validate
from kirwan_restriction import Polarization, restrictions_for
from localization import check_pneqq, intertwiner_check
from loop_spaces import check_loop_restriction, check_stabilization, main_theorem_check, xi_positive_loops
from models import CheckResult, DimensionMismatchError, HypertoricError, InputError, Report, RunConfig
from stable_envelopes import (Slope, build_opposite, build_stab, check_axioms, check_duality,
                              duality_pairing, random_slope)
from xi_classes import check_degree_bound, check_vanishing, membership_table, xi_matrix

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID_INPUT = 0, 1, 2


def configure_logging():
    """File log plus stderr; stdout carries only reports"""
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(LOG_FILE),
            logging.StreamHandler(sys.stderr)
        ]
    )


def load_document(config: RunConfig) -> Dict[str, Any]:
    if config.preset:
        if config.preset not in PRESETS:
            raise InputError(f"Unknown preset {config.preset}; choose from {sorted(PRESETS)}")
        return PRESETS[config.preset]().to_document()
    if not config.input_path:
        raise InputError("Either --input or --preset is required")
    with open(config.input_path, 'r', encoding='utf-8') as f:
        return json.load(f)


def parse_slope(text: Optional[str], data: HypertoricData) -> Optional[Slope]:
    if text is None:
        return None
    try:
        slope = Slope.parse(text)
    except (TypeError, ValueError) as e:
        raise InputError(f"cannot parse slope {text!r}: {e}") from e
    if len(slope.coefficients) != data.n:
        raise DimensionMismatchError(f"slope has {len(slope.coefficients)} entries, expected |E| = {data.n}")
    return slope


class DualityCLI:
    """Command-line interface for the duality checks"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.cache = ReportCache()
        if not config.use_cache:
            self.cache.disable()
        self.exporter = ReportExporter()

    def options(self) -> Dict[str, Any]:
        c = self.config
        return {'q_order': c.q_order, 'slope': c.slope, 'slope_dual': c.slope_dual,
                'zeta': c.zeta, 'seed': c.seed, 'random_slopes': c.random_slopes,
                'polarization': c.polarization}

    def load(self) -> Tuple[HypertoricData, str]:
        document = load_document(self.config)
        input_hash = document_hash(document)
        data = HypertoricData.from_document(document)
        if self.config.zeta is not None:
            data = data.with_zeta(self.config.zeta)
        return data, input_hash

    def run(self) -> Dict[str, Any]:
        data, input_hash = self.load()
        command = self.config.command
        cached = self.cache.get(input_hash, command, self.options())
        if cached is not None:
            return cached

        report = Report(command, input_hash, calibration=dict(CALIBRATION))
        report.calibration['polarization'] = self.config.polarization
        report.data['arrangement'] = data.name
        handler = getattr(self, 'run_' + command.replace('-', '_'))
        if command != 'validate':
            require_valid(data)
        handler(data, report)

        result = report.to_dict()
        self.cache.set(input_hash, command, self.options(), result)
        return result

    # Subcommands

    def run_validate(self, data: HypertoricData, report: Report):
        validation = validate(data)
        report.extend(validation.checks)
        report.data['fixed_points'] = [p.label for p in data.fixed_points] if validation.passed else []

    def run_fixed_points(self, data: HypertoricData, report: Report):
        kr = restrictions_for(data)
        report.extend(kr.calibration_checks())
        report.data['fixed_points'] = [{
            'label': p.label,
            'alpha': {data.E[e]: list(p.alpha[e]) for e in p.base},
            'beta': {data.E[e]: list(p.beta_p[e]) for e in p.complement},
            'tangent': str(kr.tangent_class(p)),
            'polarization': str(kr.polarization_restriction(Polarization.standard(data.n), p)),
        } for p in data.fixed_points]
        report.data['restrictions'] = kr.table()
        report.data['attracting'] = membership_table(data)

    def run_dual(self, data: HypertoricData, report: Report):
        dual = data.dual
        report.extend(validate(dual).checks)
        double = gale_dual(dual)
        involutive = (double.partial, double.beta, double.eta, double.zeta) == (data.partial, data.beta, data.eta, data.zeta)
        report.add(CheckResult("gale_involution", involutive, "the dual of the dual is the original data"))
        report.data['dual'] = dual.to_document()
        report.data['bases'] = {p.label: p.parent.dual.point(p.complement).label for p in data.fixed_points}

    def run_xi_matrix(self, data: HypertoricData, report: Report):
        matrix = xi_matrix(data)
        report.extend(check_vanishing(matrix, data))
        report.extend(check_degree_bound(matrix, data))
        report.data['matrix'] = matrix.to_dict()
        report.data['attracting'] = membership_table(data)

    def polarization(self, data: HypertoricData) -> Polarization:
        standard = Polarization.standard(data.n)
        return standard.opposite() if self.config.polarization == 'opposite' else standard

    def run_stab(self, data: HypertoricData, report: Report):
        polarization = self.polarization(data)
        rng = random.Random(self.config.seed)
        slopes = []
        given = parse_slope(self.config.slope, data)
        if given is not None:
            slopes.append(given)
        for _ in range(self.config.random_slopes or (0 if given else 1)):
            slopes.append(random_slope(data, polarization, rng))

        families = []
        for slope in slopes:
            stab = build_stab(data, data.zeta, polarization, slope, self.config.q_order)
            opposite = build_opposite(stab, self.config.q_order)
            checks = check_axioms(stab) + [check_duality(duality_pairing(stab, opposite))]
            for check in checks:
                check.witness = dict(check.witness or {}, slope=str(slope))
            report.extend(checks)
            families.append({'slope': str(slope), 'stab': stab.to_dict(), 'opposite': opposite.to_dict()})
        report.data['seed'] = self.config.seed
        report.data['families'] = families

    def run_pneqq(self, data: HypertoricData, report: Report):
        checks, records = check_pneqq(data)
        report.extend(checks)
        report.data['records'] = records

    def run_intertwiner_check(self, data: HypertoricData, report: Report):
        result = intertwiner_check(data, data.zeta, None,
                                   slope=parse_slope(self.config.slope, data),
                                   slope_dual=parse_slope(self.config.slope_dual, data),
                                   polarization=self.polarization(data),
                                   q_order=self.config.q_order, seed=self.config.seed)
        report.extend(result.checks)
        report.data['records'] = result.records
        report.data['polarization'] = result.polarization
        report.data['slopes'] = result.slopes
        report.data['seed'] = self.config.seed

    def run_interface_check(self, data: HypertoricData, report: Report):
        order = self.config.q_order
        commutes, failures = check_restriction_commutes(data, order)
        report.add(CheckResult("interface_restriction", commutes,
                               "restricting the interface commutes with the fixed-point product",
                               {'failures': failures} if failures else None))
        result = main_theorem_check(data, order)
        report.extend(result.checks)
        report.add(check_loop_restriction(data, order))
        report.data['unit'] = str(result.unit) if result.unit is not None else None
        report.data['records'] = result.restrictions

    def run_loop_xi(self, data: HypertoricData, report: Report):
        order = self.config.q_order
        loops = xi_positive_loops(data, order)
        report.add(check_stabilization(data, order, order + 1))
        report.data['order'] = order
        report.data['series'] = str(loops.series)
        report.data['coefficients'] = {str(k): str(c) for k, c in sorted(loops.series.coeffs.items())}

    # Cache

    def show_cache_stats(self) -> Dict[str, Any]:
        return self.cache.get_stats()

    def clear_cache(self) -> Dict[str, Any]:
        return {'removed': self.cache.clear_all()}

    def prune_cache(self) -> Dict[str, Any]:
        return {'expired_removed': self.cache.clear_expired()}


def display_report(report: Dict[str, Any]):
    """Human readable summary on stdout"""
    print(f"\n🎯 {report['command']} on {report.get('data', {}).get('arrangement', '?')}")
    print("=" * 50)
    for check in report['checks']:
        mark = 'ℹ️ ' if check.get('informational') else ('✅' if check['passed'] else '❌')
        print(f"{mark} {check['name']}: {check['detail']}")
    print(f"\n{'✅ All checks pass' if report['pass'] else '❌ Some checks failed'}")


def emit(report: Dict[str, Any], output_format: str):
    if output_format == 'json':
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False, default=str))
    else:
        display_report(report)


COMMANDS = ['validate', 'fixed-points', 'dual', 'xi-matrix', 'stab', 'pneqq',
            'intertwiner-check', 'interface-check', 'loop-xi']


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Hypertoric duality checks on hyperplane arrangements')
    subparsers = parser.add_subparsers(dest='command', help='Commands')

    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=f'Run {name}')
        source = sub.add_mutually_exclusive_group()
        source.add_argument('--input', dest='input_path', help='Arrangement JSON file')
        source.add_argument('--preset', choices=sorted(PRESETS), help='Built-in arrangement')
        sub.add_argument('--q-order', type=int, default=DEFAULT_Q_ORDER, help='q-series truncation order')
        sub.add_argument('--slope', help='Slope as a/b,c/d,...')
        sub.add_argument('--slope-dual', help='Slope on the dual as a/b,c/d,...')
        sub.add_argument('--zeta', help='Override the chamber, e.g. 2,1')
        sub.add_argument('--format', choices=['human', 'json'], default='human', help='Report format')
        sub.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Seed for random slopes')
        sub.add_argument('--random-slopes', type=int, default=0, help='Number of random slopes (stab)')
        sub.add_argument('--polarization', choices=['standard', 'opposite'], default='standard',
                         help='Coordinate polarization for stab and intertwiner-check')
        sub.add_argument('--export', choices=EXPORT_FORMATS, help='Also export the report')
        sub.add_argument('--no-cache', action='store_true', help='Ignore cached reports')

    cache_parser = subparsers.add_parser('cache', help='Cache operations')
    cache_parser.add_argument('action', choices=['stats', 'clear', 'prune'])
    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    if args.command == 'cache':
        return RunConfig(command='cache', cache_action=args.action)
    try:
        zeta = [int(x) for x in args.zeta.split(',')] if args.zeta else None
    except ValueError as e:
        raise InputError(f"cannot parse zeta {args.zeta!r}") from e
    return RunConfig(
        command=args.command,
        input_path=args.input_path,
        preset=args.preset,
        q_order=args.q_order,
        slope=args.slope,
        slope_dual=args.slope_dual,
        zeta=zeta,
        output_format=args.format,
        seed=args.seed,
        random_slopes=args.random_slopes,
        polarization=args.polarization,
        export_format=args.export,
        use_cache=not args.no_cache,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the exit status"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    configure_logging()

    try:
        config = to_run_config(args)
        cli = DualityCLI(config)
        if config.command == 'cache':
            actions = {'stats': cli.show_cache_stats, 'clear': cli.clear_cache, 'prune': cli.prune_cache}
            result = actions[config.cache_action]()
            print(json.dumps(result, indent=2, sort_keys=True))
            return EXIT_OK

        report = cli.run()
        emit(report, config.output_format)
        if config.export_format:
            filepath = cli.exporter.export_report(report, config.export_format)
            print(f"💾 Report exported to: {filepath}", file=sys.stderr)
        return EXIT_OK if report['pass'] else EXIT_CHECK_FAILED

    except (InputError, SchemaError, json.JSONDecodeError, OSError) as e:
        logger.error(f"Invalid input: {e}")
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT

    except (HypertoricError, ArithmeticError, KeyError, ValueError) as e:
        # divergent limits, inconsistent lifts, truncation and localization failures
        logger.error(f"Check failed: {type(e).__name__}: {e}")
        print(f"❌ Check failed: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_CHECK_FAILED

    except KeyboardInterrupt:
        print("\n⚠️  Operation cancelled by user", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
