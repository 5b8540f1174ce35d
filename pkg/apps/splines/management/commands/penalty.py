from pathlib import Path

import numpy as np

from apps.splines.exceptions import NumericalCheckError
from apps.splines.management.base import SplineCommand
from apps.splines.services.io import write_csv, write_triplets
from apps.splines.services.oracles import ORACLE_METHODS, random_sandwich_deviations, sandwich_deviation
from apps.splines.services.penalty import FLAVORS, build_penalty, gram


class Command(SplineCommand):
    help = 'Write the difference matrix D, Gram matrix Sbar, penalty S and root K for a knot sequence'

    def add_arguments(self, parser):
        self.add_knot_arguments(parser)
        self.add_degree_argument(parser)
        self.add_seed_argument(parser)
        parser.add_argument('--penalty-order', '-m', dest='m', type=int, default=2)
        parser.add_argument('--flavor', choices=FLAVORS, default='derivative')
        parser.add_argument('--out-dir', default='.', help='Directory for D.csv, Sbar.csv, S.csv and K.csv')
        parser.add_argument('--triplets', action='store_true', help='Also write D and K as (row, col, value) files')
        parser.add_argument('--check', action='store_true', help='Compare the sandwich penalty with a quadrature oracle')
        parser.add_argument('--check-random', type=int, default=0, metavar='N',
                            help='Run the oracle comparison on N random knot sets')
        parser.add_argument('--oracle', choices=ORACLE_METHODS, default='scipy')
        parser.add_argument('--tolerance', type=float, default=1e-8)

    def handle(self, *args, **options):
        d = options['degree'] + 1
        m = options['m']
        kv = self.resolve_knots(options, d)
        penalty = build_penalty(kv, m, options['flavor'])
        lower_gram = penalty.gram or gram(kv, d, m)

        meta = self.meta(
            seed=options['seed'], d=d, m=m, flavor=options['flavor'], knots=kv.t.tolist(),
        )
        out_dir = Path(options['out_dir'])
        write_csv(out_dir / 'D.csv', penalty.diff.to_dense(), meta=meta)
        write_csv(out_dir / 'Sbar.csv', lower_gram.to_dense(), meta=meta)
        write_csv(out_dir / 'S.csv', penalty.to_dense(), meta=meta)
        write_csv(out_dir / 'K.csv', penalty.root.to_dense(), meta=meta)
        if options['triplets']:
            write_triplets(out_dir / 'D_triplets.csv', penalty.diff.band, meta=meta)
            write_triplets(out_dir / 'K_triplets.csv', penalty.root, meta=meta)
        self.stdout.write(f'Wrote {options["flavor"]} penalty (p={penalty.p}, m={m}) to {out_dir}')

        if options['check']:
            deviation = sandwich_deviation(kv, m, method=options['oracle'])
            self.report_check([deviation], options['tolerance'])

        if options['check_random']:
            rng = np.random.default_rng(options['seed'])
            deviations = [dev for _, _, dev in random_sandwich_deviations(options['check_random'], rng)]
            self.report_check(deviations, options['tolerance'])

    def report_check(self, deviations, tolerance):
        worst = max(deviations)
        if not worst < tolerance:
            raise NumericalCheckError(
                f'sandwich penalty deviates from the oracle: max dev {worst:.3e} >= {tolerance:g}'
            )
        self.stdout.write(f'max dev < {tolerance:g} (worst {worst:.3e} over {len(deviations)} configuration(s))')
