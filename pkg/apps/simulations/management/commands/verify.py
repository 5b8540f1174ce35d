import json

from apps.simulations.services.acceptance import CRITERIA, run_acceptance
from apps.splines.exceptions import NumericalCheckError
from apps.splines.management.base import SplineCommand


class Command(SplineCommand):
    help = 'Run the end-to-end acceptance suite and report pass/fail per criterion'

    def add_arguments(self, parser):
        self.add_seed_argument(parser)
        parser.add_argument('--json', action='store_true', help='Print the machine-readable report')
        parser.add_argument('--quick', action='store_true', help='Smaller replicate counts for the study criteria')
        parser.add_argument('--golden-file', help='Alternative golden matrix file')
        parser.add_argument(
            '--only', nargs='+', choices=[name for name, _ in CRITERIA], metavar='CRITERION',
            help='Run only the named criteria'
        )

    def handle(self, *args, **options):
        self.meta(seed=options['seed'], quick=options['quick'])
        report = run_acceptance(
            seed=options['seed'],
            quick=options['quick'],
            golden_file=options['golden_file'],
            only=options['only'],
        )

        if options['json']:
            self.stdout.write(json.dumps(report, indent=2, sort_keys=True))
        else:
            for criterion in report['criteria']:
                label = self.style.SUCCESS('PASS') if criterion['passed'] else self.style.ERROR('FAIL')
                self.stdout.write(f"{label} {criterion['name']}: {criterion['detail']}")

        failed = [c['name'] for c in report['criteria'] if not c['passed']]
        if failed:
            raise NumericalCheckError(f"acceptance criteria failed: {', '.join(failed)}")
