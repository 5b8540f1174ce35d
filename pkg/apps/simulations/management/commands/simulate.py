from django.conf import settings

from apps.simulations.services.studies import STUDIES, build_study_config, run_study, write_study_outputs
from apps.splines.management.base import SplineCommand


class Command(SplineCommand):
    help = 'Run a Monte-Carlo comparison of the four penalized spline estimators'

    def add_arguments(self, parser):
        parser.add_argument('--study', choices=STUDIES, required=True)
        parser.add_argument('--N', dest='N', type=int, help='Number of replicates (default: 100)')
        parser.add_argument('--n', dest='n', type=int, help='Sample size per replicate (study default)')
        self.add_degree_argument(parser)
        parser.add_argument('--gamma', type=float, help='Noise-to-signal ratio of the random-curve study')
        parser.add_argument('--k', type=int, help='Interior knots of the estimators (study default)')
        parser.add_argument('--m', type=int, nargs='+', help='Penalty orders (study default)')
        self.add_seed_argument(parser)
        parser.add_argument(
            '--workers', type=int, default=getattr(settings, 'PSPLINES_SIM_WORKERS', 1),
            help='Worker processes; results do not depend on it (default: %(default)s)'
        )
        parser.add_argument('--out', default='.', help='Output directory (default: %(default)s)')

    def handle(self, *args, **options):
        cfg = build_study_config(
            study=options['study'],
            N=options['N'],
            n=options['n'],
            d=options['degree'] + 1,
            k=options['k'],
            m=options['m'],
            gamma=options['gamma'],
            seed=options['seed'],
            workers=options['workers'],
        )
        self.meta(**cfg.describe())

        step = max(1, cfg.N // 10)

        def progress(done, total):
            if done % step == 0 or done == total:
                self.stderr.write(f'{done}/{total} replicates')

        result = run_study(cfg, progress=progress if options['verbosity'] > 1 else None)
        paths = write_study_outputs(result, options['out'])

        for group in result.summary()['groups']:
            if group['count']:
                self.stdout.write(
                    f"{group['flavor']:>9} m={group['m']}: median delta {group['median']:.4g} ({group['count']} fits)"
                )
        if result.failures:
            self.stdout.write(self.style.WARNING(f'{len(result.failures)} fit(s) failed and were excluded'))
        self.stdout.write(f"Wrote {', '.join(str(p) for p in paths)}")
