import factory
from django.utils import timezone

from apps.simulations.models import StudyRun


class StudyRunFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = StudyRun

    study = StudyRun.Study.UCURVE
    config = factory.LazyAttribute(
        lambda run: {'study': run.study, 'N': 10, 'n': 500, 'd': 4, 'k': 100, 'm': [2], 'seed': run.seed}
    )

    class Params:
        seed = 0
        completed = factory.Trait(
            status=StudyRun.Status.COMPLETED,
            started_at=factory.LazyFunction(timezone.now),
            completed_at=factory.LazyFunction(timezone.now),
            processing_time=factory.Faker('pyfloat', min_value=0.5, max_value=120.0),
            summary=factory.LazyAttribute(lambda run: {'study': run.study, 'replicates': 10, 'groups': [],
                                                       'failures': 0, 'failed_fits': []}),
        )
        failed = factory.Trait(
            status=StudyRun.Status.FAILED,
            error_message='invalid study configuration',
        )
