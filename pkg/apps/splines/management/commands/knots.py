import io
import json

from django.core.management.base import CommandError

from apps.splines.exceptions import InvalidArgumentError
from apps.splines.management.base import EXIT_VALIDATION, SplineCommand
from apps.splines.services.io import knots_to_dict, open_input, read_csv, write_json, write_knots_csv
from apps.splines.services.knots import validate


class Command(SplineCommand):
    help = 'Place knots (uniform or clamped quantile) or validate a knot sequence'

    def add_arguments(self, parser):
        self.add_knot_arguments(parser)
        self.add_degree_argument(parser)
        parser.add_argument('--out', default='-', help="Output path, '-' for stdout (default: %(default)s)")
        parser.add_argument('--format', choices=['csv', 'json'], default='csv')
        parser.add_argument(
            '--validate', metavar='FILE',
            help='Report diagnostics for a raw knot sequence instead of placing knots'
        )

    def handle(self, *args, **options):
        d = options['degree'] + 1
        if options['validate']:
            return self.handle_validate(options['validate'], d)

        kv = self.resolve_knots(options, d)
        meta = self.meta(
            strategy='file' if options['knot_file'] else options['strategy'],
            k=kv.k, d=kv.d, domain=list(kv.domain),
        )
        with self.output(options['out']) as target:
            if options['format'] == 'json':
                write_json(target, knots_to_dict(kv), meta=meta)
            else:
                write_knots_csv(target, kv, meta=meta)

    def handle_validate(self, path, d):
        with open_input(path) as handle:
            text = handle.read()
        if text.lstrip().startswith('{'):
            try:
                document = json.loads(text)
            except json.JSONDecodeError as exc:
                raise InvalidArgumentError(f'could not parse knot JSON: {exc}') from exc
            report = validate(document.get('t', []), document.get('d', d))
        else:
            data, file_meta = read_csv(io.StringIO(text))
            report = validate(data[:, 0], file_meta.get('d', d))
        self.stdout.write(json.dumps(report.as_dict(), indent=2))
        if not report.is_valid:
            raise CommandError('; '.join(report.violations), returncode=EXIT_VALIDATION)
