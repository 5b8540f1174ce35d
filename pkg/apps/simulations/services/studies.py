"""
Monte-Carlo comparison of the four penalized spline estimators.

Every replicate draws its own data from a stream derived from the master seed
and the replicate index, so serial and parallel runs give identical results.
All four estimators are fitted to the same (x, y) of a replicate.
"""
import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import List, Literal

import numpy as np
from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from apps.fitting.services.curve import ESTIMATORS, FitOptions, fit_curve
from apps.splines.exceptions import InvalidArgumentError, SplineError
from apps.splines.services.io import build_meta, float_format, header_lines, write_json

from .signals import (
    normal_mixture,
    normal_mixture_curvature,
    random_spline,
    sample_mixture_design,
    sample_u_design,
    u_curve,
)
from .tent import TentDensity

logger = logging.getLogger(__name__)

STUDIES = ('ucurve', 'mixture1', 'mixture2', 'random')
STUDY_DEFAULTS = {
    'ucurve': {'n': 500, 'd': 4, 'k': 100},
    'mixture1': {'n': 1000, 'd': 4, 'k': 100},
    'mixture2': {'n': 1000, 'd': 4, 'k': 100},
    'random': {'n': 1000, 'd': 4},
}
DOMAINS = {
    'ucurve': (-3.0, 3.0),
    'mixture1': (-2.0, 2.0),
    'mixture2': (-2.0, 2.0),
    'random': (0.0, 1.0),
}
SUMMARY_QUANTILES = (0.0, 0.25, 0.5, 0.75, 1.0)


class StudyConfig(BaseModel):
    """
    Fully resolved study parameters.

    Study-specific defaults (n, k, penalty orders) and the settings-driven
    constants are filled in at construction.
    """
    model_config = ConfigDict(frozen=True)

    study: Literal['ucurve', 'mixture1', 'mixture2', 'random']
    N: int = Field(default=100, ge=1)
    n: int = Field(ge=10)
    d: int = Field(ge=2)
    k: int = Field(ge=0)
    m: List[int]
    gamma: float = Field(default=0.1, gt=0.0)
    seed: int = Field(default_factory=lambda: int(getattr(settings, 'PSPLINES_DEFAULT_SEED', 0)))
    workers: int = Field(default_factory=lambda: int(getattr(settings, 'PSPLINES_SIM_WORKERS', 1)), ge=1)
    noise_fraction: float = Field(default_factory=lambda: float(getattr(settings, 'PSPLINES_NOISE_FRACTION', 0.1)))
    tent_half_width: float = Field(
        default_factory=lambda: float(getattr(settings, 'PSPLINES_TENT_HALF_WIDTH', 0.08)), gt=0.0
    )
    tent_peak_ratio: float = Field(
        default_factory=lambda: float(getattr(settings, 'PSPLINES_TENT_PEAK_RATIO', 4.0)), ge=1.0
    )

    @model_validator(mode='before')
    @classmethod
    def fill_study_defaults(cls, values):
        if not isinstance(values, dict):
            return values
        values = {key: value for key, value in values.items() if value is not None}
        study = values.get('study')
        for key, default in STUDY_DEFAULTS.get(study, {}).items():
            values.setdefault(key, default)
        d = int(values.get('d', 4))
        if study == 'random':
            values.setdefault('k', 29 * d)
            values.setdefault('m', list(range(1, d)))
        else:
            values.setdefault('m', [2])
        return values

    @model_validator(mode='after')
    def check_orders(self):
        if not self.m:
            raise ValueError('at least one penalty order is required')
        bad = [m for m in self.m if not 1 <= m <= self.d - 1]
        if bad:
            raise ValueError(f'penalty orders {bad} are outside 1..{self.d - 1}')
        return self

    @property
    def domain(self):
        return DOMAINS[self.study]

    def describe(self):
        return self.model_dump(exclude={'workers'})


def build_study_config(**values):
    try:
        return StudyConfig(**values)
    except ValidationError as exc:
        raise InvalidArgumentError(f'invalid study configuration: {exc}') from exc


@dataclass
class StudyResult:
    config: StudyConfig
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def deltas(self, flavor, m):
        return np.array([r['delta'] for r in self.records if r['flavor'] == flavor and r['m'] == m])

    def summary(self):
        """Quantiles and means of δ per (flavor, m), plus failure counts"""
        groups = []
        for m in self.config.m:
            for flavor in ESTIMATORS:
                values = self.deltas(flavor, m)
                entry = {'flavor': flavor, 'm': m, 'count': int(len(values))}
                if len(values):
                    quantiles = np.quantile(values, SUMMARY_QUANTILES)
                    entry.update({
                        'min': float(quantiles[0]),
                        'q25': float(quantiles[1]),
                        'median': float(quantiles[2]),
                        'q75': float(quantiles[3]),
                        'max': float(quantiles[4]),
                        'mean': float(values.mean()),
                    })
                groups.append(entry)
        summary = {
            'study': self.config.study,
            'replicates': self.config.N,
            'groups': groups,
            'failures': len(self.failures),
            'failed_fits': list(self.failures),
        }
        if self.config.study.startswith('mixture'):
            summary['curvature_sign_match'] = self.curvature_sign_matches()
        return summary

    def curvature_sign_matches(self):
        """Share of replicates per estimator whose fitted f''(0) has the sign of g''(0)"""
        target = np.sign(normal_mixture_curvature(0.0))
        shares = {}
        for flavor in ESTIMATORS:
            values = [r['curvature_at_zero'] for r in self.records
                      if r['flavor'] == flavor and r.get('curvature_at_zero') is not None]
            shares[flavor] = float(np.mean(np.sign(values) == target)) if values else None
        return shares

    def median(self, flavor, m):
        values = self.deltas(flavor, m)
        return float(np.median(values)) if len(values) else float('nan')


@dataclass(frozen=True)
class ReplicateData:
    x: np.ndarray
    g: np.ndarray
    y: np.ndarray
    sigma: float
    signal_sd: float
    extras: dict


def replicate_rng(seed, replicate):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(replicate),)))


def _fixed_sigma(cfg, signal):
    lo, hi = cfg.domain
    grid = np.linspace(lo, hi, 1001)
    return cfg.noise_fraction * float(np.ptp(signal(grid)))


def simulate_data(cfg, rng):
    """Design, true signal, noise level and observations of one replicate"""
    extras = {}
    if cfg.study == 'ucurve':
        x = np.sort(sample_u_design(cfg.n, rng, cfg.domain))
        g = u_curve(x)
        sigma = _fixed_sigma(cfg, u_curve)
    elif cfg.study in ('mixture1', 'mixture2'):
        x = np.sort(sample_mixture_design(cfg.n, int(cfg.study[-1]), rng, cfg.domain))
        g = normal_mixture(x)
        sigma = _fixed_sigma(cfg, normal_mixture)
    else:
        curve = random_spline(cfg.d, rng)
        tent = TentDensity(curve.extrema, half_width=cfg.tent_half_width, peak_ratio=cfg.tent_peak_ratio)
        x = np.sort(tent.sample(cfg.n, rng))
        g = curve(x)
        sigma = cfg.gamma * float(np.std(g, ddof=1))
        extras['extrema'] = len(curve.extrema)
    y = g + sigma * rng.standard_normal(len(x))
    return ReplicateData(x=x, g=g, y=y, sigma=sigma, signal_sd=float(np.std(g, ddof=1)), extras=extras)


def run_replicate(cfg, replicate):
    """Records and failures of every estimator and penalty order for one replicate"""
    data = simulate_data(cfg, replicate_rng(cfg.seed, replicate))
    records, failures = [], []
    for m in cfg.m:
        for flavor in ESTIMATORS:
            options = FitOptions.for_estimator(flavor, k=cfg.k, d=cfg.d, m=m, domain=cfg.domain)
            try:
                curve = fit_curve(data.x, data.y, options)
            except SplineError as e:
                logger.warning(f'Replicate {replicate}: {flavor} fit with m={m} failed and is excluded: {e}')
                failures.append({'replicate': replicate, 'flavor': flavor, 'm': m, 'error': str(e)})
                continue
            record = {
                'replicate': replicate,
                'flavor': flavor,
                'm': m,
                'delta': float(np.mean((curve.result.fitted - data.g) ** 2) / data.sigma ** 2),
                'sigma': data.sigma,
                'signal_sd': data.signal_sd,
                'lambda': curve.result.lam,
                'edf': curve.result.edf,
                **data.extras,
            }
            if cfg.study.startswith('mixture') and cfg.d >= 3:
                record['curvature_at_zero'] = float(curve.predict(0.0, m=2))
            records.append(record)
    return records, failures


def run_study(cfg, progress=None):
    """
    Execute every replicate, serially or on ``cfg.workers`` processes.

    Failed fits are logged, counted and left out of the records.
    """
    logger.info(f'Running {cfg.study} study: {cfg.describe()}')
    if cfg.study == 'random':
        logger.info(f'Tent density: half_width={cfg.tent_half_width}, peak_ratio={cfg.tent_peak_ratio}')
    else:
        signal = u_curve if cfg.study == 'ucurve' else normal_mixture
        logger.info(f'Noise sigma={_fixed_sigma(cfg, signal):.6g} ({cfg.noise_fraction} x signal range)')

    result = StudyResult(config=cfg)
    worker = partial(run_replicate, cfg)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            outcomes = executor.map(worker, range(cfg.N))
            for replicate, (records, failures) in enumerate(outcomes):
                result.records.extend(records)
                result.failures.extend(failures)
                if progress:
                    progress(replicate + 1, cfg.N)
    else:
        for replicate in range(cfg.N):
            records, failures = worker(replicate)
            result.records.extend(records)
            result.failures.extend(failures)
            if progress:
                progress(replicate + 1, cfg.N)

    logger.info(f'{cfg.study} study finished: {len(result.records)} fits, {len(result.failures)} excluded')
    return result


RECORD_COLUMNS = ('replicate', 'flavor', 'm', 'delta', 'sigma', 'signal_sd', 'lambda', 'edf')


def _format(value):
    if isinstance(value, float):
        return float_format() % value
    return str(value)


def _write_rows(path, meta, columns, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', encoding='utf-8', newline='') as handle:
        for line in header_lines(meta):
            handle.write(line + '\n')
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format(row.get(column, '')) for column in columns])


def write_study_outputs(result, out_dir):
    """replicates.csv, boxplot.csv and summary.json under out_dir"""
    out_dir = Path(out_dir)
    cfg = result.config
    meta = build_meta(**cfg.describe())

    extra_columns = sorted({key for r in result.records for key in r} - set(RECORD_COLUMNS))
    _write_rows(out_dir / 'replicates.csv', meta, list(RECORD_COLUMNS) + extra_columns, result.records)
    boxplot_rows = [{'study': cfg.study, **r} for r in result.records]
    _write_rows(out_dir / 'boxplot.csv', meta, ['study', 'flavor', 'm', 'delta'], boxplot_rows)
    write_json(out_dir / 'summary.json', result.summary(), meta=meta)
    return [out_dir / 'replicates.csv', out_dir / 'boxplot.csv', out_dir / 'summary.json']
