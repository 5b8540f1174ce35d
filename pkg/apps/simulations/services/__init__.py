from .acceptance import CRITERIA, run_acceptance
from .signals import RandomCurve, normal_mixture, random_spline, u_curve
from .studies import STUDIES, StudyConfig, StudyResult, build_study_config, run_study, write_study_outputs
from .tent import TentDensity, sample_tent

__all__ = [
    'CRITERIA',
    'run_acceptance',
    'RandomCurve',
    'normal_mixture',
    'random_spline',
    'u_curve',
    'STUDIES',
    'StudyConfig',
    'StudyResult',
    'build_study_config',
    'run_study',
    'write_study_outputs',
    'TentDensity',
    'sample_tent',
]
