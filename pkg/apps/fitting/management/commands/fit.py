from django.core.management.base import CommandError

from apps.fitting.services.curve import build_options, fit_curve
from apps.splines.management.base import EXIT_USAGE, SplineCommand
from apps.splines.services.io import read_knots, read_xy, write_csv, write_json
from apps.splines.services.penalty import FLAVORS


def parse_lambda(value):
    if value == 'auto':
        return None
    try:
        lam = float(value)
    except ValueError:
        raise CommandError(f"--lambda must be 'auto' or a number, got {value!r}", returncode=EXIT_USAGE)
    if lam < 0:
        raise CommandError('--lambda must be nonnegative', returncode=EXIT_USAGE)
    return lam


class Command(SplineCommand):
    help = 'Fit a penalized spline to a two-column (x, y) CSV'

    def add_arguments(self, parser):
        parser.add_argument('input', help="CSV with x in the first and y in the second column, '-' for stdin")
        parser.add_argument('--k', type=int, default=10, help='Number of interior knots (default: %(default)s)')
        self.add_degree_argument(parser)
        parser.add_argument('--penalty-order', '-m', dest='m', type=int, default=2)
        parser.add_argument('--flavor', choices=FLAVORS, default='difference-general')
        parser.add_argument('--knots', choices=['uniform', 'quantile', 'file'], default='quantile')
        parser.add_argument('--knot-file', help='Knot file used with --knots file')
        parser.add_argument('--domain', type=float, nargs=2, metavar=('A', 'B'))
        parser.add_argument('--lambda', dest='lam', default='auto', help="'auto' for GCV or a fixed value")
        parser.add_argument('--force-naive', action='store_true',
                            help='Allow the standard difference penalty on non-uniform knots')
        parser.add_argument('--out', default='-', help="JSON result path, '-' for stdout (default: %(default)s)")
        parser.add_argument('--grid-out', help='CSV of (grid_x, fitted) on the plotting grid')

    def handle(self, *args, **options):
        d = options['degree'] + 1
        lam = parse_lambda(options['lam'])
        knots = None
        if options['knots'] == 'file':
            if not options['knot_file']:
                raise CommandError('--knots file needs --knot-file', returncode=EXIT_USAGE)
            knots = read_knots(options['knot_file'], d=d)

        x, y = read_xy(options['input'])
        fit_options = build_options(
            knot_strategy=options['knots'],
            k=options['k'],
            d=d,
            m=options['m'],
            flavor=options['flavor'],
            lam=lam,
            force_naive=options['force_naive'],
            domain=tuple(options['domain']) if options['domain'] else None,
            knots=knots,
        )
        curve = fit_curve(x, y, fit_options)
        meta = self.meta(input=str(options['input']), **fit_options.describe())

        with self.output(options['out']) as target:
            write_json(target, curve.as_dict(), meta=meta)
        if options['grid_out']:
            with self.output(options['grid_out']) as target:
                write_csv(
                    target,
                    [[gx, gy] for gx, gy in zip(curve.grid_x, curve.grid_y)],
                    meta=meta,
                    columns=['grid_x', 'fitted'],
                )
