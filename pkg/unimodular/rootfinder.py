"""
Root finder - Aberth-Ehrlich simultaneous iteration and the unit-circle census.

All arithmetic is vectorised with numpy. A batch is a stack of polynomials of
the same degree (coefficient matrix of shape (S, d + 1)) solved in lockstep,
which is how the fiber counts are evaluated at thousands of angles.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .config import MethodConfig
from .exceptions import NoConvergence

logger = logging.getLogger(__name__)

_ANGLE_OFFSET = 0.5 * (np.sqrt(5.0) - 1.0)
_EPS = np.finfo(float).eps
# relative residual every returned root must meet
_ACCEPT = np.sqrt(_EPS)


@dataclass(frozen=True)
class RootSet:
    """Roots of a polynomial, one entry per multiplicity, zero roots deflated"""
    roots: np.ndarray
    residuals: np.ndarray
    deflated: int = 0
    iterations: int = 0

    @property
    def count(self):
        return len(self.roots)

    @property
    def degree(self):
        return self.count + self.deflated

    def all_roots(self):
        """Listed roots followed by the deflated zero roots"""
        return np.concatenate([self.roots, np.zeros(self.deflated, dtype=complex)])


@dataclass(frozen=True)
class Census:
    """Internal / unimodular / external zero counts with I + U + O = d"""
    I: int
    U: int
    O: int
    d: int
    band: float

    def __post_init__(self):
        if min(self.I, self.U, self.O) < 0 or self.I + self.U + self.O != self.d:
            raise ValueError(f'inconsistent census {self}')

    def __add__(self, other):
        return Census(
            self.I + other.I, self.U + other.U, self.O + other.O,
            self.d + other.d, max(self.band, other.band),
        )

    @property
    def c_ratio(self):
        return (self.I + self.O) / self.d if self.d else 0.0

    def as_dict(self):
        return {'I': self.I, 'U': self.U, 'O': self.O, 'd': self.d, 'band': self.band}


# ============================================================================
# EVALUATION HELPERS
# ============================================================================

def _horner(coeffs, z):
    """p(z), p'(z) and sum |a_i||z|^i for ascending coeffs (..., n+1), points (..., m)"""
    n = coeffs.shape[-1] - 1
    absz = np.abs(z)
    absc = np.abs(coeffs)
    p = np.broadcast_to(coeffs[..., n:n + 1], z.shape).astype(complex)
    dp = np.zeros_like(p)
    scale = np.broadcast_to(absc[..., n:n + 1], z.shape).astype(float)
    for k in range(n - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[..., k:k + 1]
        scale = scale * absz + absc[..., k:k + 1]
    return p, dp, scale


def _newton_and_residual(coeffs, z):
    """
    Newton correction p/p' and relative residual |p| / sum |a_i||z|^i.

    Outside the unit disc both are taken from the reversed polynomial in
    w = 1/z so that high degrees never overflow.
    """
    n = coeffs.shape[-1] - 1
    with np.errstate(all='ignore'):
        p, dp, scale = _horner(coeffs, z)
        w = 1.0 / z
        q, dq, qscale = _horner(coeffs[..., ::-1], w)
        inside = np.abs(z) <= 1.0
        ratio = np.where(inside, p / dp, z / (n - w * dq / q))
        value = np.where(inside, np.abs(p), np.abs(q))
        residual = np.where(value == 0.0, 0.0, value / np.where(inside, scale, qscale))
    residual = np.where(np.isfinite(residual), residual, np.inf)
    # an exact zero takes no step
    ratio = np.where(residual == 0.0, 0.0, ratio)
    return ratio, residual


def cauchy_radius(coeffs):
    """Positive root of |a_n| r^n = sum_{i<n} |a_i| r^i, per polynomial in the batch"""
    coeffs = np.atleast_2d(coeffs)
    n = coeffs.shape[-1] - 1
    absc = np.abs(coeffs)
    with np.errstate(divide='ignore'):
        logs = np.log(absc[..., :n])
    log_lead = np.log(absc[..., n])
    ratio = absc[..., :n] / absc[..., n:n + 1]
    hi = np.log1p(ratio.max(axis=-1))
    lo = np.full_like(hi, -60.0)
    powers = np.arange(n)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        rhs = np.logaddexp.reduce(logs + powers * mid[..., None], axis=-1)
        above = log_lead + n * mid > rhs
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return np.exp(hi)


# ============================================================================
# ABERTH ITERATION
# ============================================================================

def find_roots_batch(coeffs, cfg=None):
    """
    Roots of every polynomial in a batch of equal degree >= 1.

    Returns (roots, residuals, iterations) with roots of shape (S, d).
    """
    cfg = cfg or MethodConfig()
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    n = coeffs.shape[-1] - 1
    if n < 1:
        raise ValueError('degree must be >= 1')
    if n == 1:
        roots = -coeffs[:, :1] / coeffs[:, 1:2]
        return roots, np.zeros(roots.shape), 0

    radius = cauchy_radius(coeffs)
    angles = 2.0 * np.pi * np.arange(n) / n + _ANGLE_OFFSET
    z = radius[:, None] * np.exp(1j * angles)[None, :]

    converged = np.zeros(z.shape, dtype=bool)
    diag = np.arange(n)
    floor = 4.0 * n * _EPS
    iterations = 0
    for iterations in range(1, cfg.max_iter + 1):
        ratio, residual = _newton_and_residual(coeffs, z)
        settled = converged | (residual <= floor)
        with np.errstate(all='ignore'):
            diff = z[:, :, None] - z[:, None, :]
            diff[:, diag, diag] = 1.0
            inverse = 1.0 / diff
            inverse[:, diag, diag] = 0.0
            repulsion = inverse.sum(axis=-1)
            step = ratio / (1.0 - ratio * repulsion)
            step = np.where(np.isfinite(step), step, -1.0 / repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(settled, 0.0, step)
        z = z - step
        small = np.abs(step) <= cfg.root_tol * np.maximum(1.0, np.abs(z))
        converged = settled | small
        if converged.all():
            break

    # one Newton polish, kept only where it does not worsen the residual
    ratio, residual = _newton_and_residual(coeffs, z)
    ratio = np.where(np.isfinite(ratio), ratio, 0.0)
    polished = z - ratio
    _, polished_residual = _newton_and_residual(coeffs, polished)
    better = polished_residual <= residual
    z = np.where(better, polished, z)
    residual = np.where(better, polished_residual, residual)

    # the relative residual says nothing about roots at the origin
    stuck = (residual > _ACCEPT) & (np.abs(z) > cfg.root_tol)
    if stuck.any():
        raise NoConvergence(int(stuck.sum()), float(np.abs(ratio[stuck]).max()))
    if not converged.all():
        logger.debug('aberth: %d root(s) accepted on residual after %d sweeps',
                     int((~converged).sum()), iterations)
    return z, residual, iterations


def find_roots(p, cfg=None):
    """All roots of a CPoly; exact zero roots are deflated and counted separately"""
    cfg = cfg or MethodConfig()
    if p.deg < 1:
        raise ValueError('find_roots needs degree >= 1')
    coeffs = np.asarray(p.coeffs, dtype=complex)
    nz = np.flatnonzero(coeffs)
    deflated = int(nz[0])
    coeffs = coeffs[deflated:]
    if len(coeffs) == 1:
        empty = np.zeros(0, dtype=complex)
        return RootSet(empty, np.zeros(0), deflated=deflated)
    roots, residuals, iterations = find_roots_batch(coeffs[None, :], cfg)
    return RootSet(roots[0], residuals[0], deflated=deflated, iterations=iterations)


# ============================================================================
# CENSUS
# ============================================================================

def classify(rs, tau=1e-9):
    """I, U, O counts with the unimodular band | |a| - 1 | <= tau"""
    if not 0 < tau < 0.5:
        raise ValueError('tau must lie in (0, 0.5)')
    moduli = np.abs(rs.roots)
    unimodular = np.abs(moduli - 1.0) <= tau
    internal = (moduli < 1.0 - tau)
    I = int(internal.sum()) + rs.deflated
    U = int(unimodular.sum())
    O = rs.degree - I - U
    return Census(I=I, U=U, O=O, d=rs.degree, band=tau)


def census_kind(census):
    """Census-level shape: kronecker (all unimodular), salem, pisot or other"""
    if census.d and census.U == census.d:
        return 'kronecker'
    if census.d >= 4 and census.U == census.d - 2 and census.I == 1 and census.O == 1:
        return 'salem'
    if census.O == 1 and census.I == census.d - 1:
        return 'pisot'
    return 'other'
