"""
Exact LC values from the unimodular roots of disc_y P, closed-form constants,
and the envelope / sector census for P^x_{2,3}(x, x^n).
"""

import logging
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .config import MethodConfig
from .exceptions import NoConvergence, NonReciprocal, SectorViolation
from .families import FamilySpec, make
from .limit_methods import JumpPartition, LimitResult, partition_from_cuts
from .measures import nu_batch
from .polycore import disc_y, invert, is_reciprocal_bi, substitute_y_xn
from .rootfinder import Census, RootSet, classify, find_roots

logger = logging.getLogger(__name__)

# roots this far from the circle in double precision are never polished
_CANDIDATE_BAND = 1e-3
_POLISH_DPS = 60
_SAME_ANGLE = 1e-9
# double-precision roots closer than this are resolved by mpmath.polyroots
_CLUSTER = 1e-6
_POLYROOTS_STEPS = 400


@dataclass(frozen=True)
class ExactLCResult:
    jump_angles: tuple
    lc: float
    discriminant: object
    unimodular_disc_roots: tuple
    partition: JumpPartition
    notes: dict = field(default_factory=dict)

    @property
    def no_unimodular_disc_roots(self):
        return not self.unimodular_disc_roots

    def __float__(self):
        return float(self.lc)

    def to_limit_result(self):
        return LimitResult(self.lc, self.lc, 'exact', False, {
            'jump_angles': list(self.jump_angles),
            'discriminant': str(self.discriminant),
            'unimodular_disc_roots': [[z.real, z.imag] for z in self.unimodular_disc_roots],
            'no_unimodular_disc_roots': self.no_unimodular_disc_roots,
            'partition': self.partition.as_dict(),
            **self.notes,
        })


# ============================================================================
# DISCRIMINANT ROOTS
# ============================================================================

def _mp_horner(coeffs, z):
    """p, p', p'' at z for ascending integer coefficients"""
    p = dp = ddp = mpmath.mpc(0)
    for c in reversed(coeffs):
        ddp = ddp * z + 2 * dp
        dp = dp * z + p
        p = p * z + c
    return p, dp, ddp


def polish_root(coeffs, z0, dps=_POLISH_DPS, steps=80):
    """
    Schroeder iteration z -= p p' / (p'^2 - p p'') in extended precision,
    quadratic at multiple roots too. Returns the polished mpc.
    """
    with mpmath.workdps(dps):
        z = mpmath.mpc(z0)
        eps = mpmath.mpf(10) ** (10 - dps)
        for _ in range(steps):
            p, dp, ddp = _mp_horner(coeffs, z)
            denom = dp * dp - p * ddp
            if p == 0 or denom == 0:
                break
            step = p * dp / denom
            z -= step
            if abs(step) <= eps * max(1, abs(z)):
                break
        return z


def _clustered(roots, tol):
    """True when two roots lie within tol of each other"""
    roots = np.asarray(roots, dtype=complex)
    if len(roots) < 2:
        return False
    gaps = np.abs(roots[:, None] - roots[None, :])
    gaps[np.diag_indices(len(roots))] = np.inf
    return bool(gaps.min() <= tol)


def _factor_roots(factor, cfg, resolve=False):
    """Unit-circle candidates of a square-free IntPoly, in extended precision"""
    rs = find_roots(factor.to_cpoly(), cfg)
    if not resolve:
        near = [complex(z) for z in rs.roots if abs(abs(z) - 1.0) <= _CANDIDATE_BAND]
        if not near:
            return []
        polished = [polish_root(factor.coeffs, z) for z in near]
        if not (_clustered(near, _CLUSTER) or _clustered([complex(z) for z in polished], _CLUSTER)):
            return polished
        # a near-multiple cluster, or two approximants polished onto one root
        logger.info('unimodular_roots: clustered roots in a degree %d factor', factor.deg)
    core = list(factor.coeffs[rs.deflated:])
    if len(core) < 2:
        return []
    with mpmath.workdps(_POLISH_DPS):
        try:
            roots = mpmath.polyroots(core[::-1], maxsteps=_POLYROOTS_STEPS,
                                     extraprec=4 * _POLISH_DPS, roots_init=list(rs.roots))
        except mpmath.libmp.NoConvergence as exc:
            raise NoConvergence(factor.deg) from exc
        return [z for z in roots if abs(abs(z) - 1) <= _CANDIDATE_BAND]


def unimodular_roots(poly, cfg=None, resolve=False):
    """
    Distinct roots of an IntPoly on the unit circle, polished against the exact
    coefficients of its square-free factors. resolve=True sends every factor
    with a candidate through mpmath.polyroots.
    """
    cfg = cfg or MethodConfig()
    if poly.deg < 1:
        return ()
    found = []
    for factor, multiplicity in poly.squarefree_factors():
        if multiplicity > 1:
            logger.debug('unimodular_roots: factor of degree %d with multiplicity %d',
                         factor.deg, multiplicity)
        for z in _factor_roots(factor, cfg, resolve):
            with mpmath.workdps(_POLISH_DPS):
                gap = abs(abs(z) - 1)
            if gap < cfg.tau_exact:
                found.append(complex(z))
    return tuple(found)


def _angles(roots):
    """Distinct arguments / 2 pi in (0, 1), sorted"""
    ts = sorted(float(np.angle(z) / (2 * np.pi)) % 1.0 for z in roots)
    out = []
    for t in ts:
        if t < _SAME_ANGLE or t > 1.0 - _SAME_ANGLE:
            continue
        if out and t - out[-1] < _SAME_ANGLE:
            continue
        out.append(t)
    return out


# ============================================================================
# EXACT ROUTE
# ============================================================================

def _missed_samples(P, partition, cfg):
    """Midpoint samples of a grid_n grid, clear of every cut, where nu disagrees with the partition"""
    n = cfg.grid_n
    ts = (np.arange(n) + 0.5) / n
    edges = np.asarray(partition.angles)
    ts = ts[np.abs(ts[:, None] - edges[None, :]).min(axis=1) > 0.5 / n]
    observed = nu_batch(P, ts, cfg, offset=0.25 / n)
    return int((observed != partition.values_at(ts)).sum())


def _cut_partition(P, disc, cfg, resolve):
    roots = unimodular_roots(disc, cfg, resolve=resolve)
    cuts = _angles(roots)
    # fibers lose a root to infinity where a_g vanishes on the circle
    extra = [t for t in _angles(unimodular_roots(P.leading_y, cfg)) if t not in cuts]
    return roots, cuts, extra, partition_from_cuts(P, cuts + extra, cfg)


def lc_exact(P, cfg=None):
    """LC(P) with jump points at the unimodular roots of disc_y P"""
    cfg = cfg or MethodConfig()
    g = P.deg_y
    if g < 1:
        raise ValueError('lc_exact needs deg_y >= 1')
    if not is_reciprocal_bi(P):
        raise NonReciprocal(f'{P} is not reciprocal')

    disc = disc_y(P, budget=cfg.disc_budget)
    roots, cuts, extra, partition = _cut_partition(P, disc, cfg, resolve=False)
    missed = _missed_samples(P, partition, cfg)
    if missed:
        logger.warning('lc_exact: nu disagrees with the cut partition at %d sample(s), '
                       'resolving disc_y at %d digits', missed, _POLISH_DPS)
        roots, cuts, extra, partition = _cut_partition(P, disc, cfg, resolve=True)
        missed = _missed_samples(P, partition, cfg)
        if missed:
            logger.warning('lc_exact: %d sample(s) still disagree after resolving', missed)
    if not roots:
        logger.info('lc_exact: disc_y has no unimodular roots, nu is constant %d',
                    partition.values[0])
    lc = min(max(2.0 / g * partition.integral(), 0.0), 1.0)
    return ExactLCResult(
        jump_angles=tuple(cuts),
        lc=lc,
        discriminant=disc,
        unimodular_disc_roots=roots,
        partition=partition,
        notes={'leading_cuts': extra, 'grid_mismatch': missed},
    )


# ============================================================================
# CLOSED FORMS AND ENVELOPES
# ============================================================================

def _arccos(c, form):
    if form == 'arccos':
        return math.acos(c)
    if form == 'atan2':
        return math.atan2(math.sqrt(1.0 - c * c), c)
    raise ValueError(f'unknown form {form!r}')


def closed_form(name, form='arccos'):
    """lc_p23 = 1 - (2/pi) arccos(sqrt(2)/2 - 1/2), lc_p23_inv = arccos(3/4) / pi"""
    if name == 'lc_p23':
        return 1.0 - 2.0 / math.pi * _arccos(math.sqrt(2.0) / 2.0 - 0.5, form)
    if name == 'lc_p23_inv':
        return _arccos(0.75, form) / math.pi
    raise ValueError(f'unknown closed form {name!r}')


def f1(t, n):
    """x^-(2n+1) P^x_{2,3}(x, x^n) at x = e^{it}"""
    t = np.asarray(t, dtype=float)
    return (2 * np.cos((2 * n + 1) * t) + 2 * np.cos((n + 1) * t)
            + 2 * np.cos(n * t) + 1)


def envelopes(t):
    """(E1, E2) = 3 +- 4 cos(t/2)"""
    half = 4 * np.cos(np.asarray(t, dtype=float) / 2)
    return 3 + half, 3 - half


SECTOR_BOUNDS = (2 * math.acos(0.75), 2 * math.acos(-0.75))


@dataclass(frozen=True)
class SectorCensus:
    """Root census of P^x_{2,3}(x, x^n) split by argument"""
    n: int
    lower: Census
    middle: Census
    upper: Census

    @property
    def total(self):
        return self.lower + self.middle + self.upper

    def as_dict(self):
        return {
            'n': self.n, 'bounds': list(SECTOR_BOUNDS),
            'lower': self.lower.as_dict(), 'middle': self.middle.as_dict(),
            'upper': self.upper.as_dict(), 'total': self.total.as_dict(),
        }


def p23_inverted():
    """P^x_{2,3} = 1 + y + xy + xy^2 + xy^3 + x^2y^3 + x^2y^4"""
    return invert(make(FamilySpec('P', (2, 3))))


def sector_census(n, cfg=None):
    """Bucket the roots of P^x_{2,3}(x, x^n) by argument; the middle sector must be unimodular"""
    if n < 5:
        raise ValueError('sector_census needs n >= 5')
    cfg = cfg or MethodConfig()
    rs = find_roots(substitute_y_xn(p23_inverted(), n).to_cpoly(), cfg)
    args = np.angle(rs.roots) % (2 * np.pi)
    lo, hi = SECTOR_BOUNDS
    masks = (args < lo, (args >= lo) & (args <= hi), args > hi)
    parts = [classify(RootSet(rs.roots[m], rs.residuals[m]), cfg.tau) for m in masks]
    middle = rs.roots[masks[1]]
    off = middle[np.abs(np.abs(middle) - 1.0) > cfg.tau]
    if off.size:
        raise SectorViolation(list(off))
    return SectorCensus(n, *parts)
