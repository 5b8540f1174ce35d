"""
End-to-end acceptance suite run by ``manage.py verify``.

Each criterion returns a ``CriterionResult``; an exception inside a criterion
is reported as a named failure rather than aborting the suite.
"""
import filecmp
import json
import logging
import tempfile
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from django.conf import settings

from apps.fitting.services.curve import build_options, fit_curve
from apps.fitting.services.solver import FitConfig, PenalizedSystem
from apps.splines.services.basis import BasisSpec, eval_spline
from apps.splines.services.knots import KnotVector, place_quantile_clamped, place_uniform
from apps.splines.services.oracles import random_knot_vector, random_sandwich_deviations
from apps.splines.services.penalty import derivative_penalty, general_diff, standard_diff

from .signals import sample_u_design
from .studies import build_study_config, run_study, write_study_outputs

logger = logging.getLogger(__name__)

DEFAULT_GOLDEN_FILE = Path(settings.BASE_DIR) / 'apps' / 'splines' / 'fixtures' / 'golden_general_diff.json'


@dataclass
class CriterionResult:
    name: str
    passed: bool
    detail: str = ''
    primary: bool = True
    seconds: float = 0.0
    measured: dict = field(default_factory=dict)


def _rational_matrix(rows):
    return np.array([[float(Fraction(cell)) for cell in row] for row in rows])


def load_golden(path):
    with open(path, encoding='utf-8') as handle:
        document = json.load(handle)
    kv = KnotVector(document['knots'], int(document['d']))
    general = {int(m): _rational_matrix(rows) for m, rows in document['general'].items()}
    standard = [(int(item['p']), int(item['m']), _rational_matrix(item['matrix'])) for item in document['standard']]
    return kv, general, standard


def check_golden_general(golden_file, **_):
    kv, general, _standard = load_golden(golden_file)
    worst = 0.0
    for m, expected in general.items():
        actual = general_diff(kv, kv.d, m).to_dense()
        if actual.shape != expected.shape:
            return False, f'm={m}: shape {actual.shape} differs from golden {expected.shape}', {}
        worst = max(worst, float(np.max(np.abs(actual - expected))))
    return worst < 1e-12, f'max abs error {worst:.3e} over m={sorted(general)}', {'max_error': worst}


def check_golden_standard(golden_file, **_):
    _kv, _general, standard = load_golden(golden_file)
    for p, m, expected in standard:
        actual = standard_diff(p, m).to_dense()
        if actual.shape != expected.shape or not np.array_equal(actual, expected):
            return False, f'D_{p}^({m}) differs from the golden matrix', {}
    return True, f'{len(standard)} matrices match exactly', {}


def check_sandwich(rng, quick=False, **_):
    count = 10 if quick else 50
    deviations = [dev for _, _, dev in random_sandwich_deviations(count, rng)]
    worst = max(deviations)
    return worst < 1e-8, f'max relative deviation {worst:.3e} over {count} configurations', {'max_deviation': worst}


def check_sparse_root(rng, quick=False, **_):
    for _ in range(5 if quick else 20):
        kv = random_knot_vector(rng)
        m = int(rng.integers(1, kv.d))
        penalty = derivative_penalty(kv, kv.d, m)
        K = penalty.root.to_dense()
        S = penalty.to_dense()
        gap = float(np.max(np.abs(K.T @ K - S))) / max(1.0, float(np.max(np.abs(S))))
        if gap >= 1e-10:
            return False, f'KᵀK differs from S by {gap:.3e} (d={kv.d}, m={m})', {}
        if penalty.root.width != kv.d:
            return False, f'root has {penalty.root.width} entries per row, expected {kv.d}', {}
        singular = np.linalg.svd(K, compute_uv=False)
        rank = int(np.sum(singular > 1e-10 * singular.max()))
        if rank != kv.p - m:
            return False, f'root rank {rank} differs from p - m = {kv.p - m}', {}
    return True, 'KᵀK = S, d entries per row and full row rank', {}


def line_data(n, rng, noise=0.2):
    """Noisy observations of g(x) = x on an uneven design over [-3, 3]"""
    x = np.sort(sample_u_design(n, rng))
    return x, x + noise * rng.standard_normal(n)


def check_null_space_limit(rng, **_):
    x, y = line_data(400, rng)
    slope, intercept = np.polyfit(x, y, 1)
    line = slope * x + intercept
    measured = {}
    for k in (10, 50):
        general = fit_curve(x, y, build_options(
            knot_strategy='quantile', k=k, d=4, m=2, flavor='difference-general', lam=1e8))
        naive = fit_curve(x, y, build_options(
            knot_strategy='quantile', k=k, d=4, m=2, flavor='difference-standard', lam=1e8, force_naive=True))
        general_gap = float(np.max(np.abs(general.result.fitted - line)))
        naive_gap = float(np.max(np.abs(naive.result.fitted - line)))
        measured[f'k={k}'] = {'general': general_gap, 'standard': naive_gap}
        if not (general_gap < 1e-3 and naive_gap > 1e-2):
            return False, f'k={k}: general gap {general_gap:.3e}, standard gap {naive_gap:.3e}', measured
    return True, 'general fit follows the least-squares line; standard penalty does not', measured


def check_uniform_reduction(**_):
    worst = 0.0
    for d in range(2, 7):
        kv = place_uniform((0.0, 1.0), 7, d)
        h = 1.0 / 8
        for m in range(1, d):
            general = general_diff(kv, d, m).to_dense()
            expected = standard_diff(kv.p, m).to_dense() / h ** m
            worst = max(worst, float(np.max(np.abs(general - expected)) / np.max(np.abs(expected))))
    return worst < 1e-12, f'max relative error {worst:.3e}', {'max_error': worst}


def check_edf_limits(rng, **_):
    # S is of order one on [0, 10]
    x = np.sort(rng.uniform(0.0, 10.0, 200))
    kv = place_quantile_clamped(x, 10, 4, domain=(0.0, 10.0))
    basis = BasisSpec(kv)
    cfg = FitConfig(basis=basis, penalty=derivative_penalty(kv, 4, 2))
    system = PenalizedSystem(x, np.zeros_like(x), basis, cfg.penalty)
    low, high = system.edf(1e-10), system.edf(1e12)
    path = [system.edf(10.0 ** e) for e in np.linspace(-8, 8, 41)]
    monotone = bool(np.all(np.diff(path) <= 1e-8))
    passed = abs(low - kv.p) < 1e-3 and abs(high - 2) < 1e-2 and monotone
    return passed, f'edf(1e-10)={low:.6f} (p={kv.p}), edf(1e12)={high:.6f}, monotone={monotone}', {
        'edf_low': low, 'edf_high': high,
    }


def check_derivative_evaluation(rng, **_):
    kv = random_knot_vector(rng, d=4, k=6, domain=(0.0, 1.0))
    basis = BasisSpec(kv)
    grid = np.linspace(kv.a + 1e-3, kv.b - 1e-3, 400)
    near_knot = np.min(np.abs(grid[:, None] - kv.domain_knots[None, :]), axis=1) < 1e-4
    grid = grid[~near_knot]
    h = 1e-6
    worst = 0.0
    for _ in range(200):
        beta = rng.uniform(-1.0, 1.0, basis.p)
        analytic = eval_spline(basis, beta, grid, 1)
        numeric = (eval_spline(basis, beta, grid + h) - eval_spline(basis, beta, grid - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(analytic - numeric))))
    return worst < 1e-6, f'max |analytic - finite difference| {worst:.3e}', {'max_error': worst}


def check_ucurve_study(seed, quick=False, **_):
    cfg = build_study_config(study='ucurve', N=20 if quick else 100, seed=seed, workers=1)
    result = run_study(cfg)
    medians = {flavor: result.median(flavor, 2) for flavor in ('ospline', 'standard', 'naive', 'general')}
    others = [medians[f] for f in ('ospline', 'standard', 'general')]
    return all(medians['naive'] > value for value in others), f'medians {medians}', medians


def check_random_study(seed, quick=False, **_):
    cfg = build_study_config(study='random', N=8 if quick else 30, d=4, n=1000, gamma=0.1, m=[2], seed=seed, workers=1)
    result = run_study(cfg)
    medians = {flavor: result.median(flavor, 2) for flavor in ('ospline', 'standard', 'naive', 'general')}
    good = [medians[f] for f in ('ospline', 'standard', 'general')]
    ratios = [a / b for i, a in enumerate(good) for j, b in enumerate(good) if i != j]
    close = all(0.8 <= ratio <= 1.25 for ratio in ratios)
    naive_worse = all(medians['naive'] > value for value in good)
    return close and naive_worse, f'medians {medians}', medians


def check_determinism(seed, **_):
    cfg = build_study_config(study='random', N=4, n=200, d=3, m=[2], seed=seed, workers=1)
    with tempfile.TemporaryDirectory() as serial_dir, tempfile.TemporaryDirectory() as parallel_dir:
        write_study_outputs(run_study(cfg), serial_dir)
        write_study_outputs(run_study(cfg.model_copy(update={'workers': 2})), parallel_dir)
        names = ['replicates.csv', 'boxplot.csv', 'summary.json']
        _match, mismatch, errors = filecmp.cmpfiles(serial_dir, parallel_dir, names, shallow=False)
    differing = mismatch + errors
    return not differing, 'serial and parallel outputs are identical' if not differing else f'differ: {differing}', {}


CRITERIA = (
    ('golden_general_diff', check_golden_general),
    ('golden_standard_diff', check_golden_standard),
    ('sandwich_identity', check_sandwich),
    ('sparse_root', check_sparse_root),
    ('null_space_limit', check_null_space_limit),
    ('uniform_reduction', check_uniform_reduction),
    ('edf_limits', check_edf_limits),
    ('derivative_evaluation', check_derivative_evaluation),
    ('ucurve_study', check_ucurve_study),
    ('random_curve_study', check_random_study),
    ('determinism', check_determinism),
)


def run_acceptance(seed=0, quick=False, golden_file=None, only=None):
    """Run the criteria (all, or the names in ``only``) and return a JSON-ready report"""
    golden_file = Path(golden_file) if golden_file else DEFAULT_GOLDEN_FILE
    results = []
    for index, (name, check) in enumerate(CRITERIA):
        if only and name not in only:
            continue
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
        started = time.monotonic()
        try:
            passed, detail, measured = check(rng=rng, seed=seed, quick=quick, golden_file=golden_file)
        except Exception as e:
            logger.error(f'Criterion {name} raised {type(e).__name__}: {e}')
            passed, detail, measured = False, f'{type(e).__name__}: {e}', {}
        results.append(CriterionResult(
            name=name,
            passed=bool(passed),
            detail=detail,
            seconds=round(time.monotonic() - started, 3),
            measured=measured,
        ))
        logger.info(f'{name}: {"PASS" if passed else "FAIL"} ({detail})')

    return {
        'seed': seed,
        'quick': quick,
        'passed': all(r.passed for r in results),
        'criteria': [asdict(r) for r in results],
    }
