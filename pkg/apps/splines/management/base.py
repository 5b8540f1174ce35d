"""
Shared base for the psplines management commands.

Exit codes: 0 success, 1 usage, 2 validation, 3 numerical check failure.
"""
import io
import json
import logging
import sys
from contextlib import contextmanager

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError, CommandParser

from apps.splines.exceptions import NumericalCheckError, SplineError
from apps.splines.services.io import build_meta, read_csv, read_knots
from apps.splines.services.knots import place_knots

logger = logging.getLogger('apps.splines')

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_CHECK = 3


class UsageErrorParser(CommandParser):
    """Argument errors exit with the usage code instead of argparse's 2"""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')
        raise CommandError(f'Error: {message}', returncode=EXIT_USAGE)


class SplineCommand(BaseCommand):
    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.__class__ = UsageErrorParser
        return parser

    def add_degree_argument(self, parser, default=3):
        parser.add_argument(
            '--degree', type=int, default=default,
            help='Polynomial degree d - 1 of the B-splines (default: %(default)s)'
        )

    def add_seed_argument(self, parser):
        parser.add_argument(
            '--seed', type=int, default=getattr(settings, 'PSPLINES_DEFAULT_SEED', 0),
            help='Seed for every random draw (default: %(default)s)'
        )

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except NumericalCheckError as e:
            raise CommandError(str(e), returncode=EXIT_CHECK) from e
        except SplineError as e:
            raise CommandError(str(e), returncode=EXIT_VALIDATION) from e

    @contextmanager
    def output(self, target):
        """Yield a writable target; '-' is buffered and sent to self.stdout"""
        if str(target) != '-':
            yield target
            return
        buffer = io.StringIO()
        yield buffer
        self.stdout.write(buffer.getvalue(), ending='')

    def meta(self, seed=None, **config):
        """Metadata header for output files; also logged"""
        meta = build_meta(seed=seed, command=self.command_name, **config)
        logger.info(f"{self.command_name} configuration: {json.dumps(meta, sort_keys=True, default=str)}")
        return meta

    @property
    def command_name(self):
        return self.__module__.rsplit('.', 1)[-1]

    def add_knot_arguments(self, parser, default_strategy='uniform'):
        parser.add_argument('--knots', dest='knot_file', help='Knot file (one-column CSV or JSON {d, t})')
        parser.add_argument(
            '--strategy', choices=['uniform', 'quantile'], default=default_strategy,
            help='Automatic placement when no knot file is given (default: %(default)s)'
        )
        parser.add_argument('--k', type=int, default=10, help='Number of interior knots (default: %(default)s)')
        parser.add_argument('--domain', type=float, nargs=2, metavar=('A', 'B'), help='Domain [a, b]')
        parser.add_argument('--data', help='CSV whose first column holds the sample for quantile knots')

    def resolve_knots(self, options, d):
        """Knot vector from --knots, or from placement flags"""
        if options.get('knot_file'):
            kv = read_knots(options['knot_file'], d=d)
            return kv
        sample = read_csv(options['data'])[0][:, 0] if options.get('data') else None
        strategy = options['strategy']
        if strategy == 'quantile' and sample is None:
            raise CommandError('quantile knots need --data', returncode=EXIT_USAGE)
        if strategy == 'uniform' and options.get('domain') is None and sample is None:
            raise CommandError('uniform knots need --domain or --data', returncode=EXIT_USAGE)
        return place_knots(strategy, sample, options['k'], d, domain=options.get('domain'))
