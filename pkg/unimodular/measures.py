"""
Measures - Mahler measure (univariate and on the torus), absolute S-measure,
the nonunimodular ratio C(P) and the fiber count nu(x).
"""

import logging

import numpy as np

from .config import MethodConfig
from .exceptions import DegenerateLeading, QuadratureNonconvergent
from .polycore import specialize_x, substitute_y_xn, y_coefficients
from .rootfinder import classify, find_roots, find_roots_batch

logger = logging.getLogger(__name__)

_CHUNK = 1024


# ============================================================================
# UNIVARIATE
# ============================================================================

def log_mahler_uni(p, cfg=None):
    """m(P) = log|a_d| + sum log max(1, |a_j|)"""
    rs = find_roots(p, cfg)
    moduli = np.abs(rs.roots)
    return float(np.log(abs(p.leading)) + np.log(np.maximum(moduli, 1.0)).sum())


def mahler_uni(p, cfg=None):
    return float(np.exp(log_mahler_uni(p, cfg)))


def s_measure(p, cfg=None):
    """Mean modulus of the zeros, zero roots included"""
    rs = find_roots(p, cfg)
    return float(np.abs(rs.roots).sum() / rs.degree)


def c_ratio(p, cfg=None):
    """(I + O) / d"""
    cfg = cfg or MethodConfig()
    return classify(find_roots(p, cfg), cfg.tau).c_ratio


# ============================================================================
# FIBER COUNTS
# ============================================================================

def nu(P, x0, cfg=None):
    """Number of roots y of P(x0, y) with |y| > 1 + tau"""
    cfg = cfg or MethodConfig()
    fiber = specialize_x(P, x0, cfg.degenerate_floor)
    if fiber.deg < 1:
        return 0
    rs = find_roots(fiber, cfg)
    return int((np.abs(rs.roots) > 1.0 + cfg.tau).sum())


def _lowest_column(P):
    """Index of the first y-column that is not identically zero (y^b | P)"""
    for k in range(P.deg_y + 1):
        if any(row[k] for row in P.coeffs):
            return k
    return P.deg_y


def fiber_coefficients(P, ts, cfg, offset=None):
    """
    Coefficients in y of P(e(t), y) for every angle t, degenerate samples
    re-placed by t + offset (DegenerateLeading when no offset is allowed).

    Returns (angles actually used, coefficient matrix without the y^b factor).
    """
    ts = np.array(ts, dtype=float, ndmin=1)
    coeffs = y_coefficients(P, np.exp(2j * np.pi * ts))
    lead = np.abs(coeffs[:, -1])
    bad = lead <= cfg.degenerate_floor
    if bad.any():
        if offset is None:
            i = int(np.flatnonzero(bad)[0])
            raise DegenerateLeading(np.exp(2j * np.pi * ts[i]), lead[i])
        logger.info('re-placing %d degenerate sample(s), first at t=%.15g',
                    int(bad.sum()), ts[bad][0])
        ts[bad] = ts[bad] + offset
        coeffs[bad] = y_coefficients(P, np.exp(2j * np.pi * ts[bad]))
        lead = np.abs(coeffs[:, -1])
        if (lead <= cfg.degenerate_floor).any():
            i = int(np.flatnonzero(lead <= cfg.degenerate_floor)[0])
            raise DegenerateLeading(np.exp(2j * np.pi * ts[i]), lead[i])
    return ts, coeffs[:, _lowest_column(P):]


def fiber_roots(P, ts, cfg=None, offset=None):
    """Roots y_k(e(t)) for every angle, shape (len(ts), g - b)"""
    cfg = cfg or MethodConfig()
    ts, coeffs = fiber_coefficients(P, ts, cfg, offset)
    if coeffs.shape[1] < 2:
        return ts, np.zeros((len(ts), 0), dtype=complex)
    roots = np.empty((len(ts), coeffs.shape[1] - 1), dtype=complex)
    for start in range(0, len(ts), _CHUNK):
        roots[start:start + _CHUNK], _, _ = find_roots_batch(coeffs[start:start + _CHUNK], cfg)
    return ts, roots


def nu_batch(P, ts, cfg=None, offset=None):
    """nu(e(t)) for an array of angles t"""
    cfg = cfg or MethodConfig()
    _, roots = fiber_roots(P, ts, cfg, offset)
    return (np.abs(roots) > 1.0 + cfg.tau).sum(axis=1)


# ============================================================================
# BIVARIATE MAHLER MEASURE
# ============================================================================

def _torus_log_mean(P, n):
    """Midpoint-rule mean of log|P| on an n x n grid of the torus"""
    t = (np.arange(n) + 0.5) / n
    y = np.exp(2j * np.pi * t)
    coeffs = y_coefficients(P, y)
    total = 0.0
    for start in range(0, n, _CHUNK // 4):
        block = coeffs[start:start + _CHUNK // 4]
        values = np.zeros((len(block), n), dtype=complex)
        for k in range(P.deg_y, -1, -1):
            values = values * y[None, :] + block[:, k:k + 1]
        total += np.log(np.maximum(np.abs(values), np.finfo(float).tiny)).sum()
    return total / (n * n)


def mahler_bi(P, cfg=None):
    """exp of the torus average of log|P|, refinement-checked against half the grid"""
    cfg = cfg or MethodConfig()
    fine = float(np.exp(_torus_log_mean(P, cfg.mahler_grid)))
    coarse = float(np.exp(_torus_log_mean(P, cfg.mahler_grid // 2)))
    logger.debug('mahler_bi: grid %d -> %.12g, grid %d -> %.12g',
                 cfg.mahler_grid, fine, cfg.mahler_grid // 2, coarse)
    if abs(fine - coarse) > 10 * cfg.quad_tol:
        raise QuadratureNonconvergent(fine, coarse, cfg.quad_tol)
    return fine


def mahler_bi_jensen(P, cfg=None):
    """Torus average via Jensen's formula on each fiber, midpoint rule in x"""
    cfg = cfg or MethodConfig()
    n = cfg.quad_points
    ts = (np.arange(n) + 0.5) / n
    ts, roots = fiber_roots(P, ts, cfg, offset=0.5 / n)
    lead = y_coefficients(P, np.exp(2j * np.pi * ts))[:, -1]
    logs = np.log(np.abs(lead)) + np.log(np.maximum(np.abs(roots), 1.0)).sum(axis=1)
    return float(np.exp(logs.mean()))


def boyd_lawton_trace(P, n_list, cfg=None):
    """[(n, M(P(x, x^n)))] for every n in n_list"""
    cfg = cfg or MethodConfig()
    trace = []
    for n in n_list:
        if n < 1:
            raise ValueError('n must be >= 1')
        trace.append((n, mahler_uni(substitute_y_xn(P, n).to_cpoly(), cfg)))
    return trace
