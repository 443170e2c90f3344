"""
Limit methods - approximations of LC(P), the limit ratio of nonunimodular
zeros of P(x, x^n):

    lc_bm        sampled torus integral of nu(e(t))
    lc_mbm       exact step-function integral over bisected jump points
    lc_cap       argument-principle double integral at radii r and r^n
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .config import MethodConfig
from .exceptions import GridTooCoarse, PoleNearContour, QuadratureNonconvergent
from .measures import nu_batch
from .polycore import is_reciprocal_bi, y_coefficients
from .rootfinder import find_roots

logger = logging.getLogger(__name__)

CAP_SCHEDULE = ((0.9999, 150), (0.99999, 300))

# offset for grid samples that land where a_g(e(t)) vanishes
_GRID_NUDGE = 1e-9
_BLOCK = 1 << 19


@dataclass(frozen=True)
class LimitResult:
    """An LC estimate with the method that produced it"""
    value: float
    raw_value: float
    method: str
    nonreciprocal: bool = False
    diagnostics: dict = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    def as_dict(self):
        return {
            'value': self.value,
            'raw_value': self.raw_value,
            'method': self.method,
            'nonreciprocal': self.nonreciprocal,
            'diagnostics': self.diagnostics,
        }


def _result(raw, method, P, diagnostics):
    return LimitResult(
        value=min(max(raw, 0.0), 1.0),
        raw_value=raw,
        method=method,
        nonreciprocal=not is_reciprocal_bi(P),
        diagnostics=diagnostics,
    )


def _require_y(P):
    if P.deg_y < 1:
        raise ValueError('LC needs deg_y >= 1')
    return P.deg_y


# ============================================================================
# BM METHOD
# ============================================================================

def lc_bm(P, cfg=None):
    """(2/g) times the midpoint average of nu(e(t)) over cfg.quad_points samples"""
    cfg = cfg or MethodConfig()
    g = _require_y(P)
    n = cfg.quad_points
    ts = (np.arange(n) + 0.5) / n
    # integer coefficients: nu(e(t)) = nu(e(1 - t)) and the midpoints pair up
    symmetric = n % 2 == 0
    if symmetric:
        ts = ts[: n // 2]
    values = nu_batch(P, ts, cfg, offset=0.5 / n)
    raw = 2.0 / g * float(values.mean())
    return _result(raw, 'bm', P, {'samples': n, 'symmetric': symmetric})


# ============================================================================
# MBM METHOD
# ============================================================================

@dataclass(frozen=True)
class JumpPartition:
    """0 = t_0 < t_1 < ... < t_m = 1 with the constant value of nu on each interval"""
    angles: tuple
    values: tuple

    def __post_init__(self):
        if self.angles[0] != 0.0 or self.angles[-1] != 1.0:
            raise ValueError('partition must start at 0 and end at 1')
        if any(b <= a for a, b in zip(self.angles, self.angles[1:])):
            raise ValueError('angles must increase strictly')
        if len(self.values) != len(self.angles) - 1:
            raise ValueError('one value per interval')
        if any(a == b for a, b in zip(self.values, self.values[1:])):
            raise ValueError('adjacent intervals must differ')

    @property
    def jumps(self):
        return self.angles[1:-1]

    @property
    def widths(self):
        return tuple(b - a for a, b in zip(self.angles, self.angles[1:]))

    def integral(self):
        return math.fsum(w * v for w, v in zip(self.widths, self.values))

    def values_at(self, ts):
        """nu on the interval holding each angle in [0, 1)"""
        cell = np.searchsorted(self.angles, np.asarray(ts, dtype=float), side='right') - 1
        return np.asarray(self.values)[np.clip(cell, 0, len(self.values) - 1)]

    def as_dict(self):
        return {'angles': list(self.angles), 'values': list(self.values)}


def partition_from_cuts(P, cuts, cfg, min_width=0.0):
    """
    Evaluate nu at the midpoints between sorted cut angles and merge
    neighbouring intervals with equal values.
    """
    angles = [0.0] + sorted(c for c in cuts if 0.0 < c < 1.0) + [1.0]
    # absorb slivers left by bisection at anomalous grid points
    kept = [angles[0]]
    for a in angles[1:-1]:
        if a - kept[-1] > min_width:
            kept.append(a)
    if len(kept) > 1 and 1.0 - kept[-1] <= min_width:
        kept.pop()
    kept.append(1.0)
    mids = 0.5 * (np.array(kept[:-1]) + np.array(kept[1:]))
    values = [int(v) for v in nu_batch(P, mids, cfg, offset=_GRID_NUDGE)]
    merged_angles, merged_values = [0.0], [values[0]]
    for a, v in zip(kept[1:-1], values[1:]):
        if v == merged_values[-1]:
            logger.info('merging spurious jump at t=%.15g (nu=%d on both sides)', a, v)
            continue
        merged_angles.append(a)
        merged_values.append(v)
    merged_angles.append(1.0)
    return JumpPartition(tuple(merged_angles), tuple(merged_values))


def _jump_cells(values):
    return np.flatnonzero(values[:-1] != values[1:])


def find_jumps(P, cfg=None):
    """Scan nu on a uniform grid, bisect every cell whose endpoint values differ"""
    cfg = cfg or MethodConfig()
    _require_y(P)
    n = cfg.grid_n
    grid = np.arange(n + 1) / n
    values = nu_batch(P, grid, cfg, offset=_GRID_NUDGE)
    cells = _jump_cells(values)

    fine = nu_batch(P, np.arange(2 * n + 1) / (2 * n), cfg, offset=_GRID_NUDGE)
    fine_count = len(_jump_cells(fine))
    if fine_count != len(cells):
        raise GridTooCoarse(len(cells), fine_count, n)

    lo, hi = grid[cells], grid[cells + 1]
    v_lo = values[cells]
    while len(lo) and (hi - lo).max() > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        v_mid = nu_batch(P, mid, cfg, offset=_GRID_NUDGE)
        left = v_mid == v_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    cuts = 0.5 * (lo + hi)
    logger.debug('find_jumps: %d jump cell(s) on grid %d', len(cells), n)
    return partition_from_cuts(P, cuts, cfg, min_width=4 * cfg.bisect_tol)


def lc_mbm(P, cfg=None):
    """(2/g) sum (t_i - t_{i-1}) nu(midpoint) over the jump partition"""
    cfg = cfg or MethodConfig()
    g = _require_y(P)
    partition = find_jumps(P, cfg)
    raw = 2.0 / g * partition.integral()
    return _result(raw, 'mbm', P, {
        'jumps': len(partition.jumps),
        'partition': partition.as_dict(),
        'grid_n': cfg.grid_n,
    })


# ============================================================================
# CAP METHOD
# ============================================================================

@dataclass(frozen=True)
class ContourCount:
    """Argument-principle zero count on the circle |x| = r"""
    value: float
    imag: float
    r: float
    points: int

    def __float__(self):
        return float(self.value)


def _next_pow2(value, low, high):
    return int(min(max(2 ** math.ceil(math.log2(max(value, 1.0))), low), high))


def cap_count_uni(p, r=None, cfg=None, normalize=True):
    """
    (2/d) * (1/2 pi i) contour integral of p'/p over |x| = r, trapezoidal rule.

    With normalize=False the raw interior zero count is returned. When r is
    omitted it is placed halfway between the largest internal root modulus
    and the unit circle.
    """
    cfg = cfg or MethodConfig()
    d = p.deg
    if d < 1:
        raise ValueError('cap_count_uni needs degree >= 1')
    if r is None:
        rs = find_roots(p, cfg)
        moduli = np.abs(rs.roots)
        inner = moduli[moduli < 1.0 - cfg.tau]
        outer = moduli[moduli >= 1.0 - cfg.tau]
        r_in = float(inner.max()) if inner.size else 0.0
        r = 0.5 * (r_in + 1.0)
        gap = math.log(float(outer.min()) / r) if outer.size else 1.0
        if r_in > 0:
            gap = min(gap, math.log(r / r_in))
    else:
        if not 0 < r:
            raise ValueError('r must be positive')
        gap = abs(math.log(r))
    points = _next_pow2(max(4 * d, 36.0 / max(gap, 1e-12)), 64, 1 << 22)

    x = r * np.exp(2j * np.pi * np.arange(points) / points)
    values = p(x)
    scale = np.abs(p.coeffs).sum() * max(r, 1.0) ** d
    if np.abs(values).min() < 1e-14 * scale:
        raise PoleNearContour(f'|p| = {np.abs(values).min():.3e} on |x| = {r}')
    integral = (p.derivative()(x) * x / values).mean()
    factor = 2.0 / d if normalize else 1.0
    if abs(integral.imag) * factor > 1e-6:
        logger.warning('cap_count_uni: imaginary part %.3e above 1e-6', integral.imag * factor)
    return ContourCount(float(integral.real * factor), float(integral.imag * factor), r, points)


def _bi_integrand(P):
    """(y dP/dy, P) on a grid of x rows and y columns"""
    def integrand(x, y):
        coeffs = y_coefficients(P, x)
        value = np.zeros((len(x), len(y)), dtype=complex)
        deriv = np.zeros_like(value)
        for k in range(P.deg_y, -1, -1):
            deriv = deriv * y[None, :] + value
            value = value * y[None, :] + coeffs[:, k:k + 1]
        return deriv * y[None, :], value
    return integrand


def cap_double_integral(integrand, g, r, n, cfg):
    """
    (2/g) times the tensor trapezoidal mean of integrand over x = r e(t),
    y = r^n e(s). Returns (value, refinement delta, imaginary part, s-points).
    """
    rho = r ** n
    # y-circle resolution: unimodular fiber roots must weigh less than 1e-8
    s_points = _next_pow2(18.5 / -math.log(rho), 256, 1 << 16)
    t_points = cfg.cap_points
    x = r * np.exp(2j * np.pi * np.arange(t_points) / t_points)
    y = rho * np.exp(2j * np.pi * np.arange(s_points) / s_points)
    rows = max(1, _BLOCK // s_points)
    per_t = np.empty(t_points, dtype=complex)
    for start in range(0, t_points, rows):
        numerator, value = integrand(x[start:start + rows], y)
        smallest = np.abs(value).min()
        if smallest < 1e-14:
            raise PoleNearContour(f'|P| = {smallest:.3e} on the integration torus')
        per_t[start:start + rows] = (numerator / value).mean(axis=1)
    fine = per_t.mean()
    coarse = per_t[::2].mean()
    value = 2.0 / g * fine.real
    delta = 2.0 / g * abs(fine.real - coarse.real)
    if delta > 10 * cfg.quad_tol:
        raise QuadratureNonconvergent(value, 2.0 / g * coarse.real, cfg.quad_tol)
    return value, delta, 2.0 / g * fine.imag, s_points


def lc_cap(P, cfg=None, r=None, n=None):
    """CAP estimate of LC(P) at radii r (for x) and r^n (for y)"""
    cfg = cfg or MethodConfig()
    g = _require_y(P)
    r = cfg.cap_r if r is None else r
    n = cfg.cap_n if n is None else n
    raw, delta, imag, s_points = cap_double_integral(_bi_integrand(P), g, r, n, cfg)
    if abs(imag) > 1e-6:
        logger.warning('lc_cap: imaginary part %.3e above 1e-6', imag)
    return _result(raw, 'cap', P, {
        'r': r, 'n': n, 'refinement_delta': delta, 'imag': imag,
        't_points': cfg.cap_points, 's_points': s_points,
    })


def lc_cap_auto(P, cfg=None):
    """CAP over the (r, n) schedule; the spread of the last two is the error estimate"""
    cfg = cfg or MethodConfig()
    runs = [lc_cap(P, cfg, r=r, n=n) for r, n in CAP_SCHEDULE]
    last = runs[-1]
    diagnostics = dict(last.diagnostics)
    diagnostics['schedule'] = [{'r': run.diagnostics['r'], 'n': run.diagnostics['n'],
                                'value': run.raw_value} for run in runs]
    diagnostics['error_estimate'] = abs(runs[-1].raw_value - runs[-2].raw_value)
    return LimitResult(last.value, last.raw_value, 'cap', last.nonreciprocal, diagnostics)


# ============================================================================
# CLOSED-FORM FAMILY INTEGRANDS
# ============================================================================

def _power_sum(x, lo, hi, weighted=False):
    """sum_{j=lo}^{hi} x^j, or sum j x^(j-1) when weighted"""
    total = np.zeros_like(x)
    for j in range(lo, hi + 1):
        if weighted:
            if j:
                total = total + j * x ** (j - 1)
        else:
            total = total + x ** j
    return total


def family_p(k, m, x, y):
    return (_power_sum(x, 0, k - 1) + y * _power_sum(x, k - 1, k + m - 2)
            + y ** 2 * _power_sum(x, k + m - 2, 2 * k + m - 3))


def family_px(k, m, x, y):
    return (_power_sum(x, 1, k - 1, weighted=True)
            + y * _power_sum(x, k - 1, k + m - 2, weighted=True)
            + y ** 2 * _power_sum(x, k + m - 2, 2 * k + m - 3, weighted=True))


def family_py(k, m, x, y):
    return _power_sum(x, k - 1, k + m - 2) + 2 * y * _power_sum(x, k + m - 2, 2 * k + m - 3)


def lc_cap_family(k, m, which='direct', cfg=None, r=None, n=None):
    """CAP for P_{k,m} (Cy) or its inversion (Cx) from the closed-form sums"""
    if k < 1 or m < 1:
        raise ValueError('k and m must be >= 1')
    cfg = cfg or MethodConfig()
    r = cfg.cap_r if r is None else r
    n = cfg.cap_n if n is None else n

    if which == 'direct':
        g = 2

        def integrand(x, y):
            xx, yy = x[:, None], y[None, :]
            return family_py(k, m, xx, yy) * yy, family_p(k, m, xx, yy)
    elif which == 'inverted':
        g = 2 * k + m - 3
        if g < 1:
            raise ValueError(f'inverted P_{{{k},{m}}} has no y-degree to normalise by')

        def integrand(x, y):
            xx, yy = x[:, None], y[None, :]
            return family_px(k, m, yy, xx) * yy, family_p(k, m, yy, xx)
    else:
        raise ValueError(f'unknown family orientation {which!r}')

    raw, delta, imag, s_points = cap_double_integral(integrand, g, r, n, cfg)
    return LimitResult(min(max(raw, 0.0), 1.0), raw, 'cap', False, {
        'k': k, 'm': m, 'which': which, 'r': r, 'n': n,
        'refinement_delta': delta, 'imag': imag,
        't_points': cfg.cap_points, 's_points': s_points,
    })
