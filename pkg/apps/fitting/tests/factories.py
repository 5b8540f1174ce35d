import factory

from apps.fitting.models import FitRun


class FitRunFactory(factory.django.DjangoModelFactory):
    class Meta:
        model = FitRun

    flavor = FitRun.Flavor.DIFFERENCE_GENERAL
    options = factory.LazyAttribute(lambda run: {'k': 10, 'd': 4, 'm': 2, 'flavor': run.flavor})
    n = factory.Faker('pyint', min_value=20, max_value=500)
    p = 14
    selected_lambda = factory.Faker('pyfloat', min_value=1e-3, max_value=1e3)
    edf = factory.Faker('pyfloat', min_value=2.0, max_value=14.0)
    gcv = factory.Faker('pyfloat', min_value=0.01, max_value=1.0)
    rss = factory.Faker('pyfloat', min_value=0.1, max_value=100.0)
    processing_time = factory.Faker('pyfloat', min_value=0.001, max_value=2.0)

    class Params:
        failed = factory.Trait(
            status=FitRun.Status.FAILED,
            p=None,
            selected_lambda=None,
            edf=None,
            gcv=None,
            rss=None,
            error_message='penalized normal equations are singular',
        )
