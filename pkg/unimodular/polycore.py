"""
Polynomial core - exact integer polynomials in x and (x, y), dense complex
polynomials, substitution y -> x^n, inversion, partial derivatives and the
exact discriminant in y.

Exact arithmetic in Z[x] goes through sympy; the Sylvester determinant is the
fraction-free DomainMatrix determinant over ZZ[x].
"""

import logging
import re

import numpy as np
from numpy.polynomial import polynomial as npoly
from sympy import ZZ, Poly, Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.polyerrors import ExactQuotientFailed

from .exceptions import BadSpec, DegenerateLeading, DiscriminantTooCostly, NotSquarefreeGenerically

logger = logging.getLogger(__name__)

X = Symbol('x')


# ============================================================================
# UNIVARIATE INTEGER POLYNOMIALS
# ============================================================================

def _trim(values):
    values = list(values)
    while len(values) > 1 and values[-1] == 0:
        values.pop()
    return values or [0]


class IntPoly:
    """Dense polynomial in x with arbitrary-precision integer coefficients"""
    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        self.coeffs = tuple(int(c) for c in _trim(coeffs))

    @classmethod
    def from_sympy(cls, p):
        """From a sympy Poly (or expression) in x over ZZ"""
        if not isinstance(p, Poly):
            p = Poly(p, X, domain=ZZ)
        return cls(reversed(p.all_coeffs()))

    def as_sympy(self):
        return Poly(list(reversed(self.coeffs)), X, domain=ZZ)

    @property
    def deg(self):
        return -1 if self.is_zero else len(self.coeffs) - 1

    @property
    def is_zero(self):
        return self.coeffs == (0,)

    @property
    def leading(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, IntPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f'IntPoly({list(self.coeffs)})'

    def __str__(self):
        return _render({(j, 0): c for j, c in enumerate(self.coeffs)})

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other):
        return IntPoly.from_sympy(self.as_sympy() + other.as_sympy())

    def __sub__(self, other):
        return IntPoly.from_sympy(self.as_sympy() - other.as_sympy())

    def __mul__(self, other):
        return IntPoly.from_sympy(self.as_sympy() * other.as_sympy())

    def scale(self, c):
        return IntPoly.from_sympy(self.as_sympy().mul_ground(int(c)))

    def derivative(self):
        return IntPoly.from_sympy(self.as_sympy().diff(X))

    def exact_div(self, other):
        """Quotient self / other in Z[x]; ValueError if the division is not exact"""
        if other.is_zero:
            raise ZeroDivisionError('division by the zero polynomial')
        try:
            return IntPoly.from_sympy(self.as_sympy().exquo(other.as_sympy()))
        except ExactQuotientFailed as exc:
            raise ValueError(f'{self!r} is not divisible by {other!r}') from exc

    def content(self):
        return abs(int(self.as_sympy().content()))

    def primitive(self):
        """Content removed, leading coefficient positive"""
        if self.is_zero:
            return self
        _, p = self.as_sympy().primitive()
        p = IntPoly.from_sympy(p)
        return -p if p.leading < 0 else p

    def squarefree_factors(self):
        """[(factor, multiplicity)] with pairwise coprime square-free factors of positive degree"""
        if self.deg < 1:
            return []
        _, factors = self.as_sympy().sqf_list()
        return [(IntPoly.from_sympy(f), k) for f, k in factors]

    def __call__(self, x):
        return npoly.polyval(x, np.array(self.coeffs, dtype=float))

    def to_cpoly(self):
        return CPoly(np.array(self.coeffs, dtype=complex))


# ============================================================================
# COMPLEX POLYNOMIALS
# ============================================================================

class CPoly:
    """Dense complex polynomial, coefficient index = power"""
    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex))
        nz = np.flatnonzero(c)
        self.coeffs = c[: nz[-1] + 1].copy() if nz.size else np.zeros(1, dtype=complex)
        self.coeffs.flags.writeable = False

    @property
    def deg(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1]

    @property
    def is_zero(self):
        return self.deg == 0 and self.coeffs[0] == 0

    def __call__(self, x):
        return npoly.polyval(x, self.coeffs)

    def __mul__(self, other):
        return CPoly(npoly.polymul(self.coeffs, other.coeffs))

    def scale(self, c):
        return CPoly(self.coeffs * c)

    def derivative(self):
        if self.deg == 0:
            return CPoly([0])
        return CPoly(npoly.polyder(self.coeffs))

    def __repr__(self):
        return f'CPoly(deg={self.deg})'


# ============================================================================
# BIVARIATE INTEGER POLYNOMIALS
# ============================================================================

class IntBiPoly:
    """
    Integer polynomial P(x, y) stored as a dense matrix c[j][k] of x^j y^k.

    The matrix is trimmed: the last row and the last column hold a nonzero
    entry unless P is zero.
    """
    __slots__ = ('coeffs',)

    def __init__(self, rows):
        rows = [list(int(c) for c in r) for r in rows] or [[0]]
        width = max(len(r) for r in rows)
        rows = [r + [0] * (width - len(r)) for r in rows]
        while len(rows) > 1 and not any(rows[-1]):
            rows.pop()
        while width > 1 and not any(r[width - 1] for r in rows):
            width -= 1
        self.coeffs = tuple(tuple(r[:width]) for r in rows)

    @classmethod
    def from_terms(cls, terms):
        """Build from a {(j, k): coefficient} mapping"""
        terms = {key: c for key, c in terms.items() if c}
        if not terms:
            return cls([[0]])
        dx = max(j for j, _ in terms)
        dy = max(k for _, k in terms)
        rows = [[0] * (dy + 1) for _ in range(dx + 1)]
        for (j, k), c in terms.items():
            rows[j][k] += c
        return cls(rows)

    @classmethod
    def from_columns(cls, columns):
        """Build from the y-coefficients a_0(x), ..., a_g(x) given as IntPoly"""
        return cls.from_terms({
            (j, k): c for k, col in enumerate(columns) for j, c in enumerate(col.coeffs)
        })

    @property
    def deg_x(self):
        return len(self.coeffs) - 1

    @property
    def deg_y(self):
        return len(self.coeffs[0]) - 1

    @property
    def is_zero(self):
        return self.coeffs == ((0,),)

    def terms(self):
        return {
            (j, k): c
            for j, row in enumerate(self.coeffs)
            for k, c in enumerate(row) if c
        }

    def column(self, k):
        """a_k(x), the coefficient of y^k"""
        return IntPoly(row[k] for row in self.coeffs)

    @property
    def leading_y(self):
        return self.column(self.deg_y)

    def as_array(self):
        return np.array(self.coeffs, dtype=float)

    def __eq__(self, other):
        return isinstance(other, IntBiPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f'IntBiPoly({[list(r) for r in self.coeffs]})'

    def __str__(self):
        return _render(self.terms())

    def to_json(self):
        return {'coeffs': [list(r) for r in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls(data['coeffs'])


def _render(terms):
    """Text form in the input grammar, e.g. 1+y+x*y^2-3*x^2"""
    parts = []
    for (j, k) in sorted(terms, key=lambda jk: (jk[1], jk[0])):
        c = terms[(j, k)]
        if not c:
            continue
        factors = []
        if j:
            factors.append('x' if j == 1 else f'x^{j}')
        if k:
            factors.append('y' if k == 1 else f'y^{k}')
        mono = '*'.join(factors)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f'{abs(c)}*{mono}'
        sign = '-' if c < 0 else '+'
        parts.append(body if not parts and c > 0 else f'{sign}{body}')
    return ''.join(parts) or '0'


_TERM = re.compile(r'(-?)(\d+)?(?:\*?(x)(?:\^(\d+))?)?(?:\*?(y)(?:\^(\d+))?)?')


def parse_poly(text):
    """
    Parse the text grammar, a sum of terms c*x^j*y^k, e.g. 1+y+x*y^2-3*x^2.

    Whitespace is ignored; '*' between factors is optional; repeated
    monomials are summed.
    """
    s = ''.join(text.split()).replace('−', '-')
    if not s:
        raise BadSpec('empty polynomial')
    terms = {}
    for chunk in s.replace('-', '+-').split('+'):
        if not chunk:
            continue
        m = _TERM.fullmatch(chunk)
        if m is None or not (m.group(2) or m.group(3) or m.group(5)):
            raise BadSpec(f'cannot parse term {chunk!r} in {text!r}')
        sign, coeff, x, xpow, y, ypow = m.groups()
        c = int(coeff) if coeff else 1
        j = (int(xpow) if xpow else 1) if x else 0
        k = (int(ypow) if ypow else 1) if y else 0
        terms[(j, k)] = terms.get((j, k), 0) + (-c if sign else c)
    return IntBiPoly.from_terms(terms)


# ============================================================================
# OPERATIONS
# ============================================================================

def substitute_y_xn(P, n):
    """P(x, x^n); colliding monomials are summed"""
    if n < 1:
        raise ValueError('n must be >= 1')
    out = [0] * (P.deg_x + n * P.deg_y + 1)
    for (j, k), c in P.terms().items():
        out[j + n * k] += c
    return IntPoly(out)


def invert(P):
    """P^x(x, y) = P(y, x): transpose of the coefficient matrix"""
    return IntBiPoly(zip(*P.coeffs))


def partial_x(P):
    return IntBiPoly.from_terms({(j - 1, k): j * c for (j, k), c in P.terms().items() if j})


def partial_y(P):
    return IntBiPoly.from_terms({(j, k - 1): k * c for (j, k), c in P.terms().items() if k})


def y_coefficients(P, xs):
    """Matrix of a_k(x) for every x in xs, shape xs.shape + (deg_y + 1,)"""
    values = npoly.polyval(np.asarray(xs, dtype=complex), P.as_array())
    return np.moveaxis(np.atleast_1d(values), 0, -1)


def eval_bi(P, x, y):
    """P(x, y) with numpy broadcasting between x and y"""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=complex), np.asarray(y, dtype=complex))
    coeffs = y_coefficients(P, x)
    result = np.zeros(x.shape, dtype=complex)
    for k in range(P.deg_y, -1, -1):
        result = result * y + coeffs[..., k]
    return result


def specialize_x(P, x0, floor=1e-12):
    """P(x0, y) as a CPoly in y; DegenerateLeading when |a_g(x0)| <= floor"""
    coeffs = y_coefficients(P, np.array([x0]))[0]
    magnitude = abs(coeffs[-1])
    if magnitude <= floor:
        raise DegenerateLeading(x0, magnitude, result=CPoly(coeffs))
    return CPoly(coeffs)


def is_reciprocal(p):
    """p(x) = x^d p(1/x)"""
    return p.coeffs == p.coeffs[::-1]


def strip_monomial(P):
    """Remove the largest factor x^a y^b"""
    terms = P.terms()
    if not terms:
        return P
    a = min(j for j, _ in terms)
    b = min(k for _, k in terms)
    return IntBiPoly.from_terms({(j - a, k - b): c for (j, k), c in terms.items()})


def is_reciprocal_bi(P):
    """Centrally symmetric matrix (up to global sign) after removing x^a y^b"""
    Q = strip_monomial(P)
    if Q.is_zero:
        return False
    flipped = tuple(tuple(row[::-1]) for row in Q.coeffs[::-1])
    negated = tuple(tuple(-c for c in row) for row in flipped)
    return Q.coeffs in (flipped, negated)


# ============================================================================
# RESULTANTS AND DISCRIMINANTS
# ============================================================================

def sylvester_cost(P):
    """Coefficient multiplications of the fraction-free determinant of Syl(P, P_y)"""
    g, dx = P.deg_y, max(P.deg_x, 1)
    n = 2 * g - 1
    return sum((n - k - 1) ** 2 * ((k + 1) * dx + 1) ** 2 for k in range(n - 1))


def sylvester_det(rows):
    """Fraction-free (Bareiss) determinant of a square matrix of IntPoly over ZZ[x]"""
    ring = ZZ[X]
    entries = [[ring.from_sympy(c.as_sympy().as_expr()) for c in row] for row in rows]
    det = DomainMatrix(entries, (len(rows), len(rows)), ring).det()
    return IntPoly.from_sympy(ring.to_sympy(det))


def sylvester_matrix(f_cols, g_cols):
    """Sylvester matrix of two polynomials in y given by ascending coefficient lists"""
    m, k = len(f_cols) - 1, len(g_cols) - 1
    size = m + k
    rows = []
    for shift, cols in [(s, f_cols) for s in range(k)] + [(s, g_cols) for s in range(m)]:
        row = [IntPoly([0])] * size
        for i, c in enumerate(reversed(cols)):
            row[shift + i] = c
        rows.append(row)
    return rows


def resultant_y(P, Q):
    """Res_y(P, Q) as an IntPoly in x"""
    return sylvester_det(sylvester_matrix(
        [P.column(k) for k in range(P.deg_y + 1)],
        [Q.column(k) for k in range(Q.deg_y + 1)],
    ))


def disc_y(P, budget=None):
    """
    Discriminant of P in y, an exact integer polynomial in x.

    disc_y P = (-1)^(g(g-1)/2) Res_y(P, dP/dy) / a_g(x).
    """
    g = P.deg_y
    if g < 1:
        raise ValueError('disc_y needs deg_y >= 1')
    cost = sylvester_cost(P)
    logger.debug('disc_y: deg_y=%d deg_x=%d estimated cost %d', g, P.deg_x, cost)
    if budget is not None and cost > budget:
        raise DiscriminantTooCostly(f'estimated cost {cost:.3g} exceeds budget {budget:.3g}')
    disc = resultant_y(P, partial_y(P)).exact_div(P.leading_y)
    if (g * (g - 1) // 2) % 2:
        disc = -disc
    if disc.is_zero:
        raise NotSquarefreeGenerically('disc_y vanishes identically: repeated factor in y')
    return disc
