"""
Error types raised by the numerical layers.

Management commands map BadSpec to exit code 2 and every other
UnimodularError to exit code 3.
"""


class UnimodularError(Exception):
    """Base class for every failure raised by the unimodular app"""


class BadSpec(UnimodularError):
    """Polynomial text, family label or bracket rows could not be parsed"""


class DegenerateLeading(UnimodularError):
    """Leading y-coefficient a_g(x0) vanishes, a fiber root escaped to infinity"""

    def __init__(self, x0, magnitude, result=None):
        self.x0 = x0
        self.magnitude = magnitude
        # the trimmed specialization, still useful to callers that tolerate it
        self.result = result
        super().__init__(f'|a_g({x0})| = {magnitude:.3e} below the degeneracy floor')


class NotSquarefreeGenerically(UnimodularError):
    """disc_y P is identically zero: P has a repeated factor in y"""


class NoConvergence(UnimodularError):
    """Root iteration stagnated above tolerance"""

    def __init__(self, k, correction=None):
        self.k = k
        self.correction = correction
        message = f'{k} root(s) did not converge'
        if correction is not None:
            message += f' (max correction {correction:.3e})'
        super().__init__(message)


class QuadratureNonconvergent(UnimodularError):
    """Successive quadrature refinements disagree by more than 10x the target"""

    def __init__(self, fine, coarse, tol):
        self.fine = fine
        self.coarse = coarse
        self.tol = tol
        super().__init__(
            f'refinements differ by {abs(fine - coarse):.3e} (allowed {10 * tol:.3e})'
        )


class PoleNearContour(UnimodularError):
    """|P| on the integration contour dips below the floor"""


class GridTooCoarse(UnimodularError):
    """Doubling the scan grid changed the number of jump cells"""

    def __init__(self, coarse_count, fine_count, grid_n):
        self.coarse_count = coarse_count
        self.fine_count = fine_count
        self.grid_n = grid_n
        super().__init__(
            f'{coarse_count} jump cells at grid {grid_n}, '
            f'{fine_count} at grid {2 * grid_n}'
        )


class NonReciprocal(UnimodularError):
    """Coefficient matrix is not centrally symmetric"""


class SectorViolation(UnimodularError):
    """A nonunimodular root was found in the all-unimodular sector"""

    def __init__(self, roots):
        self.roots = list(roots)
        super().__init__(
            f'{len(self.roots)} nonunimodular root(s) in the middle sector, '
            f'first {self.roots[0]!r}'
        )


class DiscriminantTooCostly(UnimodularError):
    """Estimated Sylvester determinant cost exceeds the configured budget"""
