"""
Shared plumbing for the management commands: poly-spec parsing, tolerance
flags, report building, table computation, CSV/JSON writers and root plots.
"""

import json
import logging
import time
import uuid
from contextlib import contextmanager
from multiprocessing import Pool

import matplotlib
import numpy as np
import pandas as pd
from django.conf import settings
from django.core.management.base import CommandError
from rest_framework.renderers import JSONRenderer

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402

from .config import MethodConfig
from .exact_lc import SECTOR_BOUNDS, lc_exact
from .exceptions import BadSpec, UnimodularError
from .families import looks_like_family, make, parse_family, registry, registry_row, row_sort_key
from .limit_methods import lc_bm, lc_cap, lc_cap_auto, lc_mbm
from .models import RunReport
from .polycore import IntBiPoly, parse_poly
from .serializers import RunReportSerializer

logger = logging.getLogger(__name__)

METHODS = ('bm', 'mbm', 'cap', 'cap-auto', 'exact')

CSV_COLUMNS = [
    'row_id', 'kind', 'params', 'method',
    'lc', 'lc_expected', 'delta',
    'lc_inv', 'lc_inv_expected', 'delta_inv',
    'seconds',
]

# flag -> MethodConfig field
TOLERANCE_FLAGS = {
    'tau': ('--tau', float, 'unimodular band for | |z| - 1 |'),
    'grid_n': ('--grid-n', int, 'coarse scan resolution of the jump search'),
    'bisect_tol': ('--bisect-tol', float, 'bisection tolerance in t'),
    'quad_points': ('--quad-points', int, 'BM midpoint samples'),
    'cap_r': ('--cap-r', float, 'CAP radius r < 1'),
    'cap_n': ('--cap-n', int, 'CAP exponent n (y-radius r^n)'),
}


# ============================================================================
# INPUT
# ============================================================================

def parse_poly_spec(text):
    """
    IntBiPoly from a JSON matrix, a family label ('P(2,3)', 'inv:P(2,3)',
    bracket rows) or the text grammar. Returns (P, canonical label).
    """
    s = (text or '').strip()
    if not s:
        raise BadSpec('empty poly spec')
    if s.startswith('{'):
        try:
            P = IntBiPoly.from_json(json.loads(s))
        except (ValueError, KeyError, TypeError) as exc:
            raise BadSpec(f'bad JSON polynomial: {exc}') from exc
        return P, json.dumps(P.to_json())
    if looks_like_family(s):
        spec = parse_family(s)
        return make(spec), spec.label
    P = parse_poly(s)
    return P, str(P)


def add_poly_argument(parser):
    parser.add_argument(
        '--poly',
        required=True,
        help='Polynomial: text (1+y+x*y^2), JSON {"coeffs": [...]}, family P(2,3) / inv:P(2,3) or [++0, 0++]',
    )


def add_method_arguments(parser):
    for name, (flag, kind, text) in TOLERANCE_FLAGS.items():
        parser.add_argument(flag, dest=name, type=kind, help=f'{text} (default from settings)')


def add_output_arguments(parser):
    parser.add_argument('--save', action='store_true', help='Persist the run as a RunReport')
    parser.add_argument('--json', action='store_true', help='Print the report as JSON')


def config_from_options(options):
    """settings.UNIMODAL overridden by any tolerance flag given on the command line"""
    try:
        return MethodConfig.from_settings(**{name: options.get(name) for name in TOLERANCE_FLAGS})
    except ValueError as exc:
        raise BadSpec(str(exc)) from exc


@contextmanager
def command_errors():
    """BadSpec or invalid input -> exit 2, any other numerical failure -> exit 3"""
    try:
        yield
    except (BadSpec, ValueError) as exc:
        raise CommandError(f'BadSpec: {exc}', returncode=2) from exc
    except UnimodularError as exc:
        raise CommandError(f'{type(exc).__name__}: {exc}', returncode=3) from exc


# ============================================================================
# METHODS
# ============================================================================

def run_method(P, method, cfg):
    """LimitResult of any LC method"""
    if method == 'bm':
        return lc_bm(P, cfg)
    if method == 'mbm':
        return lc_mbm(P, cfg)
    if method == 'cap':
        return lc_cap(P, cfg)
    if method == 'cap-auto':
        return lc_cap_auto(P, cfg)
    if method == 'exact':
        return lc_exact(P, cfg).to_limit_result()
    raise BadSpec(f'unknown method {method!r}')


# ============================================================================
# REPORTS
# ============================================================================

def build_report(command, poly_spec, method, cfg, values, diagnostics=None, seconds=0.0):
    return {
        'run_id': str(uuid.uuid4()),
        'command': command,
        'poly_spec': poly_spec,
        'method': method,
        'config': cfg.as_dict(),
        'values': values,
        'diagnostics': diagnostics or {},
        'seconds': round(seconds, 6),
    }


def save_report(report):
    return RunReport.objects.create(**report)


def render_json(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}).decode()


def _is_structured(value):
    return isinstance(value, dict) or (isinstance(value, list) and any(isinstance(v, dict) for v in value))


def emit(command, report, options):
    """Print the report (text lines or JSON) and persist it when --save was given"""
    if options.get('save'):
        saved = save_report(report)
        logger.info('saved run report %s', saved.run_id)
    if options.get('json'):
        command.stdout.write(render_json(RunReportSerializer(report).data))
        return
    # structured values are printed by the command itself
    for key, value in report['values'].items():
        if _is_structured(value):
            continue
        command.stdout.write(f'{key}: {value}')
    for key, value in report['diagnostics'].items():
        if isinstance(value, (dict, list)):
            continue
        command.stdout.write(f'  {key}: {value}')
    method = f' ({report["method"]})' if report['method'] else ''
    command.stdout.write(command.style.SUCCESS(
        f'{report["command"]} {report["poly_spec"]}{method} in {report["seconds"]:.3f}s'
    ))


@contextmanager
def stopwatch():
    started = time.perf_counter()
    box = {'seconds': 0.0}
    try:
        yield box
    finally:
        box['seconds'] = time.perf_counter() - started


# ============================================================================
# TABLE
# ============================================================================

def _table_row(job):
    """One registry row, both orientations; runs in a worker process"""
    row_id, method, cfg = job
    row = registry_row(row_id)
    started = time.perf_counter()
    out = {
        'row_id': row.row_id,
        'kind': row.kind,
        'params': json.dumps(row.spec.json_params()),
        'method': method,
        'lc_expected': row.expected_LC,
        'lc_inv_expected': row.expected_LC_inv,
        'errors': [],
    }
    for suffix, spec in (('', row.spec), ('_inv', row.spec.with_inversion())):
        try:
            value = float(run_method(make(spec), method, cfg))
        except UnimodularError as exc:
            out['errors'].append(f'{spec.label}: {type(exc).__name__}: {exc}')
            value = None
        expected = out[f'lc{suffix}_expected']
        out[f'lc{suffix}'] = value
        out[f'delta{suffix}'] = None if value is None else abs(value - expected)
    out['seconds'] = round(time.perf_counter() - started, 6)
    return out


def select_rows(row_ids=None):
    """Registry rows by id, all rows when row_ids is empty; unavailable specs skipped"""
    if row_ids:
        try:
            rows = [registry_row(r) for r in row_ids]
        except KeyError as exc:
            raise BadSpec(str(exc)) from exc
    else:
        rows = list(registry())
    available = []
    for row in rows:
        if row.spec_unavailable:
            logger.warning('row %s skipped: polynomial not available', row.row_id)
            continue
        available.append(row)
    return available


def compute_table(rows, method, cfg, workers=None):
    """Per-row results sorted by row id, rows computed in a process pool"""
    workers = settings.UNIMODAL_THREADS if workers is None else workers
    jobs = [(row.row_id, method, cfg) for row in rows]
    if workers > 1 and len(jobs) > 1:
        with Pool(processes=min(workers, len(jobs))) as pool:
            results = pool.map(_table_row, jobs)
    else:
        results = [_table_row(job) for job in jobs]
    return sorted(results, key=lambda r: row_sort_key(r['row_id']))


def write_csv(results, path):
    frame = pd.DataFrame(results, columns=CSV_COLUMNS)
    frame.to_csv(path, index=False)
    return len(frame)


def write_json(data, path):
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(render_json(data))


# ============================================================================
# PLOTS
# ============================================================================

def plot_roots(roots, path, title='', sectors=False):
    """Static scatter of the roots with the unit circle, optional sector rays"""
    fig, ax = plt.subplots(figsize=(8, 8))
    ax.scatter(roots.real, roots.imag, s=8, c='tab:blue', edgecolors='none')
    ax.add_patch(plt.Circle((0, 0), 1, color='tab:red', fill=False, linestyle='--', alpha=0.6))
    if sectors:
        for angle in SECTOR_BOUNDS:
            ax.plot([0, 1.3 * np.cos(angle)], [0, 1.3 * np.sin(angle)],
                    color='gray', linewidth=0.8)
    ax.axhline(0, color='black', linewidth=0.4)
    ax.axvline(0, color='black', linewidth=0.4)
    ax.set_aspect('equal')
    limit = max(1.5, float(np.abs(roots).max()) * 1.1) if len(roots) else 1.5
    ax.set_xlim(-limit, limit)
    ax.set_ylim(-limit, limit)
    ax.set_xlabel('Re')
    ax.set_ylabel('Im')
    ax.set_title(title)
    ax.grid(True, linestyle='--', alpha=0.3)
    fig.savefig(path, format='svg')
    plt.close(fig)
