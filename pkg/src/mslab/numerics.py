"""Quadrature, Hermitian eigenvalues and positive-definite solves.

Everything here is a pure function of its inputs.  Tolerances live in
:class:`QuadratureSpec` or in the module constants below so that reruns are
bit-stable.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from numba import njit
from scipy.integrate import IntegrationWarning, quad

from .exceptions import IntegrationError, SingularGramError, TailDominationError

#: Jacobi stops once the off-diagonal Frobenius mass drops below this
#: fraction of the matrix Frobenius norm.
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100

#: Cholesky pivots (squared diagonal of the factor) below this are singular.
PIVOT_TOL = 1e-12
RESIDUAL_TOL = 1e-9
# asymmetry above this (relative) is a caller error, below it is rounding
HERMITIAN_TOL = 1e-8

MAX_NODES = 2**20

# Nested grids are offset by half the finest spacing so that no node ever
# lands on the boundary singularity zeta = 1.
_OFFSET = math.pi / MAX_NODES


@dataclass(frozen=True)
class QuadratureSpec:
    """Settings for the doubling trapezoid rules.

    Parameters
    ----------
    node_count : int
        Initial number of nodes; a power of two, at least 8.
    domain : {"unit-circle", "real-line"}
    tangent : bool
        Real line only: map to the circle with ``x = tan(theta)``.  When
        false the line is truncated and both range and step are refined.
    tol : float
        Relative change between successive doublings that counts as
        converged.  Must lie in ``(0, 1e-3]``.
    max_nodes : int
        Hard cap on the node count.
    """

    node_count: int = 64
    domain: str = "unit-circle"
    tangent: bool = True
    tol: float = 1e-10
    max_nodes: int = MAX_NODES

    def __post_init__(self):
        n = self.node_count
        if n < 8 or n & (n - 1):
            raise ValueError(f"node_count must be a power of two >= 8, got {n}")
        if self.domain not in ("unit-circle", "real-line"):
            raise ValueError(f"unknown quadrature domain {self.domain!r}")
        if not 0.0 < self.tol <= 1e-3:
            raise ValueError(f"tolerance must lie in (0, 1e-3], got {self.tol}")
        if self.max_nodes > MAX_NODES or self.max_nodes < n:
            raise ValueError(f"max_nodes must lie in [node_count, {MAX_NODES}]")

    def on(self, domain):
        """Copy of this spec for another domain."""
        return QuadratureSpec(self.node_count, domain, self.tangent, self.tol, self.max_nodes)


CIRCLE = QuadratureSpec()
LINE = QuadratureSpec(domain="real-line", tol=1e-8)


def _converged(new, old, tol, floor=0.0):
    diff = abs(new - old)
    return diff == 0.0 or diff <= tol * max(abs(new), floor)


def _real_if_real(value):
    if np.iscomplexobj(value):
        return complex(value)
    return float(value)


def _periodic_trapezoid(h, spec, edge=None, scale=1.0):
    """Mean of ``h(t)`` over ``[0, 2pi)`` on nested, offset grids.

    ``edge`` optionally maps the node count to an estimate of the error
    committed next to ``t = 0``; convergence also requires it to be small.
    """
    n = spec.node_count
    t = _OFFSET + 2.0 * np.pi * np.arange(n) / n
    vals = h(t)
    total, mass = np.sum(vals), np.sum(np.abs(vals))
    prev = total / n
    cur = prev
    streak = 0
    while 2 * n <= spec.max_nodes:
        t = _OFFSET + np.pi / n + 2.0 * np.pi * np.arange(n) / n
        vals = h(t)
        total, mass = total + np.sum(vals), mass + np.sum(np.abs(vals))
        n *= 2
        cur = total / n
        # tolerance is relative to the integral, or to mean |h| when they cancel
        # to (near) zero; two quiet doublings in a row guard against chance agreement
        streak = streak + 1 if _converged(cur, prev, spec.tol, mass / n) else 0
        if streak >= 2 and (edge is None or edge(n) <= spec.tol * max(abs(cur), mass / n)):
            return _real_if_real(scale * cur)
        prev = cur
    estimates = (_real_if_real(scale * prev), _real_if_real(scale * cur))
    if edge is not None:
        tail = edge(n)
        if tail > spec.tol * abs(cur):
            raise TailDominationError(
                f"integrand tail {tail:.3e} dominates after {n} nodes", estimates
            )
    raise IntegrationError(f"no convergence after {n} nodes", estimates)


def circle_grid(n):
    """The ``n`` nodes used by :func:`integrate_circle` at level ``n``."""
    return np.exp(1j * (_OFFSET + 2.0 * np.pi * np.arange(n) / n))


def integrate_circle(f, spec=None):
    """Normalized integral ``int_T f dsigma`` by the periodic trapezoid rule.

    ``f`` receives an array of points on the unit circle and must return an
    array of the same shape.  The node count doubles until the relative
    change drops below ``spec.tol``.  Returns a float for real integrands
    and a complex otherwise.
    """
    spec = spec or CIRCLE
    if spec.domain != "unit-circle":
        raise ValueError("integrate_circle needs a unit-circle QuadratureSpec")
    return _periodic_trapezoid(lambda t: f(np.exp(1j * t)), spec)


def integrate_circle_oscillatory(g, c, spec=None):
    """``int_T g(z) exp(c (z+1)/(z-1)) dsigma`` for real ``c``.

    The exponential factor is a singular inner function (or its conjugate)
    whose boundary values oscillate without bound near ``z = 1``, which
    defeats the trapezoid rule.  With ``z = (u+i)/(u-i)`` the factor becomes
    ``exp(-i c u)`` and ``dsigma = du / (pi (1 + u^2))``, so the integral is
    a Fourier integral of a smooth, decaying function on the line, handled
    by QUADPACK's QAWF.  ``g`` must be smooth on the circle near ``z = 1``.
    """
    spec = spec or CIRCLE
    if c == 0.0:
        return integrate_circle(g, spec)

    # QUADPACK calls back one abscissa at a time and the four passes below
    # revisit many of the same abscissae, so values are memoized
    @functools.lru_cache(maxsize=None)
    def q(u):
        z = complex(u, 1.0) / complex(u, -1.0)
        return complex(g(z)) / (math.pi * (1.0 + u * u))

    @functools.lru_cache(maxsize=None)
    def even(u):
        return q(u) + q(-u)

    @functools.lru_cache(maxsize=None)
    def odd(u):
        return q(u) - q(-u)
    scale = float(np.mean(np.abs(g(circle_grid(256))))) or 1.0
    epsabs = spec.tol * scale
    omega = abs(c)

    def fourier(fun, weight):
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                value, _ = quad(
                    lambda u: fun(u), 0.0, np.inf, weight=weight, wvar=omega,
                    epsabs=epsabs, limlst=200, limit=200,
                )
            except IntegrationWarning as exc:
                raise IntegrationError(f"oscillatory quadrature failed: {exc}") from exc
        return value

    cos_part = fourier(lambda u: even(u).real, "cos") + 1j * fourier(lambda u: even(u).imag, "cos")
    sin_part = fourier(lambda u: odd(u).real, "sin") + 1j * fourier(lambda u: odd(u).imag, "sin")
    return complex(cos_part - 1j * math.copysign(1.0, c) * sin_part)


def integrate_line(f, spec=None):
    """``int_R f(x) dx`` for an integrand decaying at least like ``|x|^-2``.

    With ``spec.tangent`` the substitution ``x = u^3``, ``u = -cot(t/2)``
    turns the line into the circle and the periodic rule applies; the cube
    damps ``cos(x) / x^2`` tails, which otherwise stall the rule near ``t = 0``.  Otherwise the line is
    truncated to ``[-L, L]`` and the midpoint rule is refined in both step
    and range.
    """
    spec = spec or LINE
    if spec.domain != "real-line":
        raise ValueError("integrate_line needs a real-line QuadratureSpec")
    if spec.tangent:
        def h(t):
            u = -1.0 / np.tan(0.5 * t)
            return f(u**3) * 3.0 * u * u * (1.0 + u * u)

        def edge(n):
            # unresolved oscillation at infinity shows up as jumps between
            # the two outermost nodes on either side of t = 0
            j = np.array([0, 1, n - 2, n - 1])
            v = h(_OFFSET + 2.0 * np.pi * j / n)
            return (abs(v[1] - v[0]) + abs(v[3] - v[2])) * np.pi / n

        return _periodic_trapezoid(h, spec, edge=edge, scale=math.pi)
    return _truncated_line(f, spec)


def _truncated_line(f, spec):
    n = spec.node_count
    prev = None
    level = 0
    while n <= spec.max_nodes:
        step = 2.0 ** (-level / 2.0)
        x = step * (np.arange(n) - n / 2 + 0.5)
        cur = _real_if_real(step * np.sum(f(x)))
        if prev is not None and _converged(cur, prev, spec.tol):
            return cur
        edge = step * float(np.abs(f(x[[0, -1]])).sum())
        prev = cur
        n *= 2
        level += 1
    if edge > spec.tol * abs(cur):
        raise TailDominationError(f"truncated line integral still sees tail mass {edge:.3e}", (prev, cur))
    raise IntegrationError("truncated line integral did not converge", (prev, cur))


def as_hermitian(a):
    """Validated copy of ``a`` with exact conjugate symmetry and real diagonal."""
    a = np.array(a, dtype=complex if np.iscomplexobj(a) else float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    skew = np.max(np.abs(a - a.conj().T), initial=0.0)
    if skew > HERMITIAN_TOL * max(np.max(np.abs(a), initial=0.0), 1.0):
        raise ValueError(f"matrix is not Hermitian (asymmetry {skew:.3e})")
    a = 0.5 * (a + a.conj().T)
    if np.iscomplexobj(a):
        np.fill_diagonal(a, a.diagonal().real)
    a.setflags(write=False)
    return a


@njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        if math.sqrt(off) < tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                alpha = abs(apq)
                if alpha < 1e-300:
                    continue
                phase = apq / alpha
                cphase = phase.conjugate()
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * alpha)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for r in range(n):
                    if r == p or r == q:
                        continue
                    arp = a[r, p]
                    arq = a[r, q] * cphase
                    nrp = c * arp - s * arq
                    nrq = c * arq + s * arp
                    a[r, p] = nrp
                    a[r, q] = nrq
                    a[p, r] = nrp.conjugate()
                    a[q, r] = nrq.conjugate()
                a[p, p] = app - t * alpha
                a[q, q] = aqq + t * alpha
                a[p, q] = 0.0
                a[q, p] = 0.0
    return max_sweeps


def hermitian_eigenvalues(a):
    """Eigenvalues of a Hermitian matrix in ascending order.

    Cyclic Jacobi with row-major sweeps; each rotation first removes the
    phase of the pivot so the 2x2 problem is real symmetric.
    """
    a = as_hermitian(a)
    work = np.array(a, dtype=np.complex128)
    scale = float(np.linalg.norm(work))
    if scale == 0.0:
        return np.zeros(a.shape[0])
    _jacobi(work, JACOBI_TOL * scale, JACOBI_MAX_SWEEPS)
    return np.sort(work.diagonal().real)


def _cholesky(a):
    try:
        factor = scipy.linalg.cholesky(a, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(f"matrix is not positive definite: {exc}") from exc
    pivots = np.abs(factor.diagonal()) ** 2
    if pivots.min() < PIVOT_TOL:
        raise SingularGramError(f"Cholesky pivot {pivots.min():.3e} below {PIVOT_TOL}")
    return factor


def solve_pd(a, b):
    """Solve ``a x = b`` for Hermitian positive-definite ``a`` by Cholesky.

    One step of iterative refinement is applied; if the residual still
    exceeds ``RESIDUAL_TOL * |b|`` the matrix is reported singular.
    """
    a = as_hermitian(a)
    b = np.asarray(b)
    factor = _cholesky(a)
    x = scipy.linalg.cho_solve((factor, True), b)
    x = x + scipy.linalg.cho_solve((factor, True), b - a @ x)
    bnorm = np.linalg.norm(b)
    if np.linalg.norm(a @ x - b) > RESIDUAL_TOL * max(bnorm, np.finfo(float).tiny):
        raise SingularGramError("residual above tolerance after refinement")
    return x


def inverse_diagonal(a):
    """Diagonal of ``a^{-1}`` for Hermitian positive-definite ``a``."""
    a = as_hermitian(a)
    factor = _cholesky(a)
    linv = scipy.linalg.solve_triangular(factor, np.eye(a.shape[0]), lower=True)
    return np.sum(np.abs(linv) ** 2, axis=0)
