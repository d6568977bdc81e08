"""Interpolation in model spaces from a dual family: the c_a weights, the
norm-ratio hypotheses, the operator T and its Monte Carlo norm bound."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InterpolationConsistencyError, PreconditionError, SingularGramError
from .geometry import DEFAULT_SEED, _grid_size, _points, gram_model
from .inner import InnerFunction, eval_inner, one_minus_abs2
from .kernels import KernelSpec, eval_kernel, kernel_diagonal, kernel_norm, kernel_sup_norm
from .numerics import QuadratureSpec, circle_grid, integrate_circle, solve_pd

EXPONENT_TOL = 1e-14
INTERP_TOL = 1e-7
BAND_LIMIT = 10.0
# the interpolant mixes kernels whose boundary values oscillate; its L^s
# norm is only asked for to moderate relative accuracy
NORM_QUAD = QuadratureSpec(node_count=1024, tol=1e-7)


def _conj(r):
    return math.inf if r == 1.0 else r / (r - 1.0)


@dataclass(frozen=True)
class ExponentTriple:
    """``1 <= s < p <= 2`` with ``1/s = 1/p + 1/q``."""

    p: float
    s: float
    q: float

    def __post_init__(self):
        if not 1.0 <= self.s < self.p <= 2.0:
            raise ValueError(f"need 1 <= s < p <= 2, got s={self.s}, p={self.p}")
        if abs(1.0 / self.s - 1.0 / self.p - 1.0 / self.q) > EXPONENT_TOL:
            raise ValueError("exponents violate 1/s = 1/p + 1/q")
        if not self.q > self.p_conj:
            raise ValueError("q must exceed the conjugate of p")

    @classmethod
    def from_ps(cls, p, s):
        return cls(float(p), float(s), 1.0 / (1.0 / s - 1.0 / p))

    @property
    def p_conj(self):
        return _conj(self.p)

    @property
    def s_conj(self):
        return _conj(self.s)

    @property
    def q_conj(self):
        return _conj(self.q)


def _norm(a, inner, r, quad=None):
    if r == math.inf:
        return kernel_sup_norm(KernelSpec(a, inner, 2.0), quad)
    if r == 2.0:
        return math.sqrt(kernel_diagonal(a, inner))
    return kernel_norm(KernelSpec(a, inner, r), quad)


def c_constant(a, I, E, J, triple, variant="s-norm", quad=None):
    """Weight ``c_a`` that makes ``T`` hit the interpolation targets.

    s-norm: ``||k^E||_q ||k^J||_{s'} / (||k^I||_{p'} k^E(a))``.
    sup-kernel: ``||k^E||_{p'} ||k^J||_inf / (||k^I||_{p'} ||k^E||_2^2)``.
    """
    pc = triple.p_conj
    kea = kernel_diagonal(a, E)
    if variant == "s-norm":
        num = _norm(a, E, triple.q, quad) * _norm(a, J, triple.s_conj, quad)
        return num / (_norm(a, I, pc, quad) * kea)
    if variant == "sup-kernel":
        num = _norm(a, E, pc, quad) * _norm(a, J, math.inf, quad)
        return num / (_norm(a, I, pc, quad) * kea)
    raise ValueError(f"unknown c_a variant {variant!r}")


HYPOTHESES = ("sup-kernel", "norm-product", "bounded-away", "equal-factors", "singular-powers")


@dataclass(frozen=True)
class RatioReport:
    which: str
    points: tuple
    ratios: tuple
    min_ratio: float
    max_ratio: float
    two_sided: bool

    @property
    def band(self):
        return self.max_ratio / self.min_ratio

    @property
    def verdict(self):
        return "two-sided within band" if self.two_sided else "unbounded trend"


def _closed_form_rhs(a, I, E, triple):
    mi = abs(complex(eval_inner(I, a))) ** 2
    me = abs(complex(eval_inner(E, a))) ** 2
    return (1.0 - me) ** (1.0 / triple.q) * (1.0 - mi) ** (1.0 / triple.p) / float(
        one_minus_abs2(a)
    ) ** (1.0 / triple.s)


def _check_case(which, points, I, E, eta):
    if which == "bounded-away":
        for inner in (I, E):
            worst = max(abs(complex(eval_inner(inner, a))) for a in points)
            if worst > eta:
                raise PreconditionError(f"sup |inner| on the grid is {worst:.3g} > {eta}")
    elif which == "equal-factors":
        if I != E:
            raise PreconditionError("case 2 needs E = I")
    elif which == "singular-powers":
        if I.zeros or E.zeros or not I.has_singular_part:
            raise PreconditionError("case 3 needs purely singular I and E")


def ratio_hypothesis_check(points, I, E, J=None, triple=None, which="norm-product", quad=None, eta=0.9):
    """Per-point ``LHS / RHS`` of one of the kernel-norm comparisons."""
    if which not in HYPOTHESES:
        raise ValueError(f"unknown hypothesis {which!r}")
    J = J if J is not None else I * E
    pts = [complex(a) for a in _points(points)]
    triple = triple or ExponentTriple.from_ps(2.0, 1.2)
    pc, sc = triple.p_conj, triple.s_conj
    _check_case(which, pts, I, E, eta)
    ratios = []
    for a in pts:
        if which == "sup-kernel":
            lhs = _norm(a, J, math.inf, quad)
            rhs = _norm(a, I, pc, quad) * kernel_diagonal(a, E) / _norm(a, E, pc, quad)
        elif which == "norm-product":
            lhs = _norm(a, J, sc, quad)
            rhs = _norm(a, E, sc, quad) * _norm(a, I, pc, quad) / _norm(a, E, pc, quad)
        else:
            lhs = _norm(a, J, sc, quad)
            rhs = _closed_form_rhs(a, I, E, triple)
        ratios.append(lhs / rhs)
    r = np.array(ratios)
    return RatioReport(
        which, tuple(pts), tuple(ratios), float(r.min()), float(r.max()),
        bool(r.max() / r.min() < BAND_LIMIT),
    )


@dataclass
class DualFamily:
    """Functions ``rho_a = sum_b coef[b, a] k_b^I`` with ``rho_a(b) = delta_ab ||k_b^I||_{p'}``.

    Built from the ``p = 2`` Gram matrix; for ``p != 2`` it stands in for
    the dual family in ``K^p_I`` (``surrogate = True``).
    """

    points: np.ndarray
    inner: InnerFunction | None
    p: float
    coef: np.ndarray
    target_norms: np.ndarray
    surrogate: bool = field(default=False)

    def __len__(self):
        return self.points.size

    def kernel_matrix(self, z):
        """``k_b^I(z)`` for each ``b`` (rows) and each ``z`` (columns)."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return np.array([eval_kernel(KernelSpec(b, self.inner), z) for b in self.points])

    def evaluate(self, z):
        """``rho_a(z)`` for each ``a`` (rows) and each ``z`` (columns)."""
        return self.coef.T @ self.kernel_matrix(z)

    def biorthogonality_error(self):
        vals = self.evaluate(self.points)
        return float(np.max(np.abs(vals - np.diag(self.target_norms))))

    def norms2(self):
        """``||rho_a||_2`` from the kernel Gram matrix."""
        km = self.kernel_matrix(self.points)
        return np.sqrt(np.real(np.einsum("ba,bc,ca->a", np.conj(self.coef), km.T, self.coef)))


def dual_family_p2(points, inner=None, p=2.0, quad=None):
    """Dual family to the normalized kernels via the ``p = 2`` Gram matrix.

    Solves ``K coef = diag(||k_b^I||_{p'})`` with ``K[b, c] = k_c^I(b)``;
    a singular Gram matrix raises :class:`SingularGramError`, which says
    the kernels are not uniformly minimal at this truncation.
    """
    pts = _points(points)
    pc = _conj(p)
    targets = np.array([_norm(complex(b), inner, pc, quad) for b in pts])
    norms = np.sqrt([kernel_diagonal(complex(b), inner) for b in pts])
    g = gram_model(pts, inner)
    # K = D conj(G) D with D = diag(||k_b||_2)
    rhs = np.diag(targets / norms).astype(complex)
    x = solve_pd(np.conj(g), rhs)
    coef = x / norms[:, None]
    return DualFamily(pts, inner, float(p), coef, targets, surrogate=(p != 2.0))


def factorize_target(nu, triple):
    """``nu = lambda * mu`` with ``mu = |nu|^{s/q}``, ``lambda = sign(nu) |nu|^{s/p}``."""
    nu = np.asarray(nu, dtype=complex)
    mod = np.abs(nu)
    nz = mod > 0
    mu = np.zeros(nu.shape)
    lam = np.zeros(nu.shape, dtype=complex)
    mu[nz] = mod[nz] ** (triple.s / triple.q)
    lam[nz] = nu[nz] / mod[nz] * mod[nz] ** (triple.s / triple.p)
    return lam, mu


def lp_norm(x, r):
    x = np.abs(np.asarray(x))
    if r == math.inf:
        return float(x.max(initial=0.0))
    return float(np.sum(x**r) ** (1.0 / r))


@dataclass(frozen=True)
class InterpolationProblem:
    points: np.ndarray
    nu: np.ndarray
    triple: ExponentTriple
    I: InnerFunction
    E: InnerFunction
    J: InnerFunction | None = None

    def __post_init__(self):
        pts = np.asarray(_points(self.points))
        nu = np.asarray(self.nu, dtype=complex).ravel()
        if nu.size != pts.size:
            raise ValueError("target length differs from the number of points")
        J = self.J if self.J is not None else self.I * self.E
        expected = self.I * self.E
        if sorted(J.zeros, key=lambda z: (z.real, z.imag)) != sorted(
            expected.zeros, key=lambda z: (z.real, z.imag)
        ) or not math.isclose(J.exponent, expected.exponent, rel_tol=1e-12, abs_tol=1e-15):
            raise ValueError("J must equal I * E")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "J", J)


class Interpolant:
    """``h = sum_a nu_a c_a rho_a k^E_a / ||k^E_a||_q`` as an evaluable function."""

    def __init__(self, problem, dual, weights, quad=None):
        self.problem = problem
        self.dual = dual
        self.weights = np.asarray(weights)
        self.quad = quad
        tr = problem.triple
        pts = problem.points
        self.e_norms = np.array([_norm(complex(a), problem.E, tr.q, quad) for a in pts])
        self.targets = np.array([_norm(complex(a), problem.J, tr.s_conj, quad) for a in pts])

    def terms(self, z):
        """Per-point contributions, shape ``(N, len(z))``, before weighting by ``nu``."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        rho = self.dual.evaluate(z)
        ke = np.array([eval_kernel(KernelSpec(a, self.problem.E), z) for a in self.problem.points])
        return (self.weights / self.e_norms)[:, None] * rho * ke

    def __call__(self, z, nu=None):
        nu = self.problem.nu if nu is None else np.asarray(nu, dtype=complex)
        out = nu @ self.terms(z)
        return out if np.ndim(z) else complex(out[0])

    def norm(self, r, nu=None):
        """``||h||_r`` on the circle."""
        return integrate_circle(lambda z: np.abs(self(z, nu)) ** r, self.quad or NORM_QUAD) ** (1.0 / r)


@dataclass(frozen=True)
class InterpolationReport:
    max_residual: float
    relative_residual: float
    norm_s: float
    nu_norm_s: float

    @property
    def ratio(self):
        return self.norm_s / self.nu_norm_s if self.nu_norm_s else 0.0


def build_interpolant(problem, dual=None, quad=None, variant="s-norm"):
    """Assemble ``T`` for ``problem``; the target values are not needed yet."""
    dual = dual or dual_family_p2(problem.points, problem.I, problem.triple.p, quad)
    weights = [
        c_constant(complex(a), problem.I, problem.E, problem.J, problem.triple, variant, quad)
        for a in problem.points
    ]
    return Interpolant(problem, dual, weights, quad)


def interpolate(problem, dual=None, quad=None, interpolant=None, with_norm=True):
    """Build ``h = T(nu)`` and confirm ``h(a) = nu_a ||k^J_a||_{s'}`` on the points."""
    h = interpolant or build_interpolant(problem, dual, quad)
    nu = problem.nu
    got = h(problem.points, nu)
    want = nu * h.targets
    resid = float(np.max(np.abs(got - want), initial=0.0))
    scale = float(np.max(np.abs(want), initial=0.0))
    rel = resid / scale if scale else resid
    if rel > INTERP_TOL:
        raise InterpolationConsistencyError(f"interpolation residual {rel:.3e} above {INTERP_TOL}")
    s = problem.triple.s
    norm_s = h.norm(s, nu) if with_norm and scale else 0.0
    return h, InterpolationReport(resid, rel, norm_s, lp_norm(nu, s))


@dataclass(frozen=True)
class KhinchinEstimate:
    mean: float
    stderr: float
    exact_p2: float | None
    trials: int
    seed: int


def _dual_grid_values(dual, grid):
    return dual.evaluate(circle_grid(grid))


def khinchin_bound_mc(lam, dual, p=2.0, trials=1024, seed=DEFAULT_SEED, grid=None):
    """Monte Carlo ``E ||sum lam_a eps_a rho_a||_p^p / ||lam||_p^p`` over random signs.

    The norm uses a fixed circle grid.  For ``p = 2`` the exact value
    ``sum |lam_a|^2 ||rho_a||_2^2 / ||lam||_2^2`` is reported alongside.
    """
    if p > 2:
        raise PreconditionError("Khinchin bound needs p <= 2")
    if trials < 256:
        raise PreconditionError("use at least 256 trials")
    lam = np.asarray(lam, dtype=complex)
    n = grid or _grid_size(dual.points)
    vals = _dual_grid_values(dual, n)
    scale = lp_norm(lam, p) ** p
    rng = np.random.default_rng(seed)
    signs = rng.choice(np.array([-1.0, 1.0]), size=(trials, lam.size))
    samples = [float(np.mean(np.abs((lam * eps) @ vals) ** p)) / scale for eps in signs]
    mean = math.fsum(samples) / trials
    var = math.fsum((x - mean) ** 2 for x in samples) / (trials - 1)
    exact = None
    if p == 2.0:
        exact = math.fsum(np.abs(lam) ** 2 * dual.norms2() ** 2) / scale
    return KhinchinEstimate(mean, math.sqrt(var / trials), exact, trials, int(seed))


def khinchin_exhaustive(lam, dual, p=2.0, grid=None):
    """The same expectation by enumerating every sign pattern (small ``N`` only)."""
    lam = np.asarray(lam, dtype=complex)
    if lam.size > 16:
        raise PreconditionError("exhaustive enumeration limited to 16 points")
    n = grid or _grid_size(dual.points)
    vals = _dual_grid_values(dual, n)
    scale = lp_norm(lam, p) ** p
    total = [
        float(np.mean(np.abs((lam * np.array(eps)) @ vals) ** p))
        for eps in itertools.product((-1.0, 1.0), repeat=lam.size)
    ]
    return math.fsum(total) / len(total) / scale


@dataclass(frozen=True)
class ScarlReport:
    points: tuple
    ratios: tuple
    min_ratio: float
    max_ratio: float

    @property
    def band(self):
        return self.max_ratio / self.min_ratio


def scarl_comparison(points, I, r, quad=None, sup_bound=0.9):
    """``||k_a||_r / ||k^I_a||_r`` along ``points``; needs ``sup |I| <= sup_bound``."""
    pts = [complex(a) for a in _points(points)]
    worst = max(abs(complex(eval_inner(I, a))) for a in pts)
    if worst > sup_bound:
        raise PreconditionError(f"sup |I(a)| = {worst:.3g} exceeds {sup_bound}")
    ratios = np.array([_norm(a, None, r, quad) / _norm(a, I, r, quad) for a in pts])
    return ScarlReport(tuple(pts), tuple(ratios), float(ratios.min()), float(ratios.max()))


__all__ = [
    "ExponentTriple", "DualFamily", "InterpolationProblem", "Interpolant", "SingularGramError",
    "c_constant", "ratio_hypothesis_check", "dual_family_p2", "factorize_target", "interpolate",
    "build_interpolant", "khinchin_bound_mc", "khinchin_exhaustive", "scarl_comparison", "lp_norm",
]
