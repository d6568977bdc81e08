"""Reproducing kernels of H^2 and of model spaces K_I, their L^p norms on
the circle, the two-sided surrogate for those norms and trace weights."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import binom

from .exceptions import BoundaryDegenerateError, EvaluationError, IntegrationError
from .inner import InnerFunction, eval_inner, one_minus_abs2
from .numerics import (
    CIRCLE,
    QuadratureSpec,
    circle_grid,
    integrate_circle,
    integrate_circle_oscillatory,
)

POLE_TOL = 1e-14
DEGENERATE_TOL = 1e-12
# binomial series terms of |1 - c I|^p beyond this index are not attempted
MAX_SERIES_TERMS = 64


@dataclass(frozen=True)
class KernelSpec:
    """Kernel anchored at ``anchor``; ``inner=None`` means the Hardy kernel."""

    anchor: complex
    inner: Optional[InnerFunction] = None
    p: float = 2.0

    def __post_init__(self):
        a = complex(self.anchor)
        if not abs(a) < 1.0:
            raise ValueError(f"anchor {a} not in the open disk")
        if not 1.0 < self.p < np.inf:
            raise ValueError(f"exponent p must lie in (1, inf), got {self.p}")
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "p", float(self.p))

    def at(self, p):
        return KernelSpec(self.anchor, self.inner, p)

    @property
    def inner_at_anchor(self):
        if self.inner is None:
            return 0j
        return complex(eval_inner(self.inner, self.anchor))


def eval_kernel(spec, z):
    """``(1 - conj(I(a)) I(z)) / (1 - conj(a) z)``; numerator 1 for Hardy."""
    z = np.asarray(z, dtype=complex)
    a = spec.anchor
    den = 1.0 - np.conj(a) * z
    if np.any(np.abs(den) <= POLE_TOL):
        raise EvaluationError("kernel evaluated at its pole")
    if spec.inner is None:
        out = 1.0 / den
    else:
        out = (1.0 - np.conj(spec.inner_at_anchor) * eval_inner(spec.inner, z)) / den
    return out if np.ndim(out) else complex(out)


def kernel_diagonal(a, inner=None):
    """``k_a(a) = (1 - |I(a)|^2) / (1 - |a|^2)``, which is also ``||k_a||_2^2``."""
    num = 1.0 if inner is None else 1.0 - abs(complex(eval_inner(inner, a))) ** 2
    return num / float(one_minus_abs2(a))


def _series_coefficients(c, p, tol):
    """``alpha_k``, k >= 0, with ``|1 - c w|^p = sum_k alpha_k w^k`` on ``|w| = 1``.

    Negative indices are conjugates.  Returns ``None`` when more than
    ``MAX_SERIES_TERMS`` terms would be needed.
    """
    r2 = abs(c) ** 2
    if r2 == 0.0:
        return np.array([1.0 + 0j])
    nmax = int(np.ceil(np.log(1e-18) / np.log(r2))) + 2 if r2 < 1 else 10**6
    n = np.arange(nmax)
    h = 0.5 * p
    base = binom(h, n) * r2**n
    alphas = []
    for k in range(MAX_SERIES_TERMS + 1):
        alpha = (-c) ** k * np.sum(binom(h, n + k) * base)
        alphas.append(alpha)
        if k and abs(alpha) < tol * abs(alphas[0]):
            return np.array(alphas)
    return None


def kernel_norm(spec, quad=None):
    """``(int_T |k|^p dsigma)^{1/p}`` by quadrature.

    When the inner function carries a singular atom its boundary values
    oscillate near ``zeta = 1``.  The modulus ``|1 - c I|^p`` is then
    expanded in powers of ``I`` and ``conj(I)`` (a binomial series in ``c``)
    and each power goes to the oscillatory circle rule.
    """
    quad = quad or CIRCLE
    p = spec.p
    a = spec.anchor
    inner = spec.inner
    c = np.conj(spec.inner_at_anchor)

    ac = a.conjugate()

    def base(z):
        return abs(1.0 - ac * z) ** (-p)

    if inner is None or c == 0:
        return integrate_circle(base, quad) ** (1.0 / p)
    if not inner.has_singular_part:
        return integrate_circle(lambda z: np.abs(eval_kernel(spec, z)) ** p, quad) ** (1.0 / p)

    alphas = _series_coefficients(c, p, 0.01 * quad.tol)
    if alphas is None:
        return integrate_circle(lambda z: np.abs(eval_kernel(spec, z)) ** p, quad) ** (1.0 / p)
    blaschke = inner.blaschke_part() if inner.zeros else None
    total = alphas[0].real * integrate_circle(base, quad)
    for k in range(1, len(alphas)):
        if blaschke is None:
            g = base
        else:
            g = lambda z, k=k: base(z) * eval_inner(blaschke, z) ** k  # noqa: E731
        total += 2.0 * (alphas[k] * integrate_circle_oscillatory(g, k * inner.exponent, quad)).real
    if total <= 0:
        raise IntegrationError("non-positive kernel power integral", (total,))
    return float(total) ** (1.0 / p)


def kernel_inner_product(a, b, inner=None, quad=None):
    """``<k_a, k_b> = int_T k_a conj(k_b) dsigma`` computed by quadrature.

    Equals ``k_a(b)`` by the reproducing property; this routine does not use
    that and is the independent check.  For ``I = B S`` with ``S`` singular
    the integrand splits as ``h (1 + c_a conj(c_b)) - c_a h I - conj(c_b) h
    conj(I)`` with ``h = 1 / ((1 - conj(a) z) conj(1 - conj(b) z))``.
    """
    quad = quad or CIRCLE
    a, b = complex(a), complex(b)

    ac, bc = a.conjugate(), b.conjugate()

    def h(z):
        return 1.0 / ((1.0 - ac * z) * (1.0 - bc * z).conjugate())

    if inner is None:
        return integrate_circle(h, quad)
    ka = KernelSpec(a, inner)
    kb = KernelSpec(b, inner)
    if not inner.has_singular_part:
        return integrate_circle(lambda z: eval_kernel(ka, z) * np.conj(eval_kernel(kb, z)), quad)
    ca = np.conj(ka.inner_at_anchor)
    cb = np.conj(kb.inner_at_anchor)
    if inner.zeros:
        bl = inner.blaschke_part()
        g_plus = lambda z: h(z) * eval_inner(bl, z)  # noqa: E731
        g_minus = lambda z: h(z) * eval_inner(bl, z).conjugate()  # noqa: E731
    else:
        g_plus = g_minus = h
    m = inner.exponent
    value = (1.0 + ca * np.conj(cb)) * integrate_circle(h, quad)
    if ca != 0:
        value -= ca * integrate_circle_oscillatory(g_plus, m, quad)
    if cb != 0:
        value -= np.conj(cb) * integrate_circle_oscillatory(g_minus, -m, quad)
    return complex(value)


def kernel_sup_norm(spec, quad=None, tol=1e-8):
    """``max_T |k|`` by sampling on doubling circle grids."""
    quad = quad or CIRCLE
    n = quad.node_count
    # start fine enough to see a peak of width ~ 1 - |a|
    width = max(float(one_minus_abs2(spec.anchor)), 1e-12)
    while n < 16.0 / width and 2 * n <= quad.max_nodes:
        n *= 2
    prev = float(np.max(np.abs(eval_kernel(spec, circle_grid(n)))))
    streak = 0
    while 2 * n <= quad.max_nodes:
        n *= 2
        cur = float(np.max(np.abs(eval_kernel(spec, circle_grid(n)))))
        streak = streak + 1 if abs(cur - prev) <= tol * cur else 0
        if streak >= 2:
            return cur
        prev = cur
    raise IntegrationError("sup norm sampling did not settle", (prev, cur))


def aleksandrov_surrogate(a, inner, p):
    """``((1 - |I(a)|^2) / (1 - |a|^2))^{1 - 1/p}``; Hardy case when ``inner`` is None."""
    d = 1.0 - 1.0 / p
    if inner is None:
        return float(one_minus_abs2(a)) ** (-d)
    mod = abs(complex(eval_inner(inner, a)))
    if mod >= 1.0 - DEGENERATE_TOL:
        raise BoundaryDegenerateError(f"|I(a)| = {mod} too close to 1")
    return ((1.0 - mod * mod) / float(one_minus_abs2(a))) ** d


@dataclass(frozen=True)
class NormEstimate:
    value: float
    surrogate: float
    ratio: float


def norm_estimate(spec, quad=None):
    value = kernel_norm(spec, quad)
    surrogate = aleksandrov_surrogate(spec.anchor, spec.inner, spec.p)
    return NormEstimate(value, surrogate, value / surrogate)


TRACE_CONVENTIONS = ("hardy", "model", "pw-complex")


@dataclass(frozen=True)
class TraceWeight:
    point: complex
    weight: float
    convention: str

    def __post_init__(self):
        if self.convention not in TRACE_CONVENTIONS:
            raise ValueError(f"unknown trace convention {self.convention!r}")
        if not (np.isfinite(self.weight) and self.weight > 0):
            raise ValueError(f"trace weight must be finite and positive, got {self.weight}")


def trace_weights(points, convention="hardy", inner=None, p=2.0, tau=np.pi):
    """Weights for the sampled trace norm at ``points``.

    hardy: ``1 - |a|^2``; model: ``(1 - |a|^2) / (1 - |I(a)|^2)``;
    pw-complex: ``exp(-p tau |Im a|) (1 + |Im a|)``.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if convention == "hardy":
        w = one_minus_abs2(pts)
    elif convention == "model":
        if inner is None:
            raise ValueError("model weights need an inner function")
        w = one_minus_abs2(pts) / (1.0 - np.abs(eval_inner(inner, pts)) ** 2)
    elif convention == "pw-complex":
        eta = np.abs(pts.imag)
        w = np.exp(-p * tau * eta) * (1.0 + eta)
    else:
        raise ValueError(f"unknown trace convention {convention!r}")
    return [TraceWeight(complex(a), float(x), convention) for a, x in zip(pts, w)]


def trace_norm(values, weights, p):
    """``(sum_a w_a |f(a)|^p)^{1/p}``."""
    values = np.atleast_1d(np.asarray(values, dtype=complex))
    w = np.array([x.weight if isinstance(x, TraceWeight) else x for x in weights], dtype=float)
    if values.shape != w.shape:
        raise ValueError(f"{values.size} values but {w.size} weights")
    return float(np.sum(w * np.abs(values) ** p) ** (1.0 / p))
