"""Point sequences in the disk, normalized kernel Gram matrices and the
separation, weak Carleson and window diagnostics built on them."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateSequenceError, SingularGramError
from .inner import InnerFunction, blaschke_delta, eval_inner, one_minus_abs2, pseudo_hyperbolic
from .kernels import KernelSpec, eval_kernel, kernel_norm
from .numerics import QuadratureSpec, as_hermitian, circle_grid, hermitian_eigenvalues, solve_pd

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class PointSequence:
    """Finite point list with a note on where it came from.

    ``space`` is ``"disk"`` for points of the unit disk and ``"line"`` for
    real or upper half-plane points.
    """

    points: np.ndarray
    space: str = "disk"
    construction: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=complex).ravel()
        if not np.all(np.isfinite(pts)):
            raise ValueError("non-finite point")
        if self.space == "disk" and np.any(np.abs(pts) >= 1.0):
            raise ValueError("disk sequence has a point outside the open disk")
        if self.space not in ("disk", "line"):
            raise ValueError(f"unknown space {self.space!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)

    def head(self, n):
        """First ``n`` points, keeping the metadata."""
        return PointSequence(self.points[:n], self.space, self.construction, dict(self.params))

    @classmethod
    def exponential(cls, n):
        """``1 - 2^-k`` for ``k = 1..n``; exact in double precision up to ``n = 52``."""
        if not 1 <= n <= 52:
            raise ValueError("exponential sequence supports 1 <= n <= 52")
        k = np.arange(1, n + 1)
        return cls(1.0 - 2.0 ** (-k), "disk", "exponential", {"n": n})

    @classmethod
    def radial(cls, n):
        """``1 - 1/(k+1)`` for ``k = 1..n``: accumulates without separation."""
        k = np.arange(1, n + 1)
        return cls(1.0 - 1.0 / (k + 1.0), "disk", "radial", {"n": n})

    @classmethod
    def dyadic_tree(cls, n):
        """First ``n`` points of ``(1 - 4^-m) exp(2 pi i (j + 1/2) / 2^m)``.

        Ordered by generation ``m = 1, 2, ...`` then angle.  Generation ``m``
        carries ``2^m`` points, so a window of size ``h`` holds total weight
        about ``h sum_m 2^-m``: a Carleson sequence whose truncations grow
        without leaving double precision.
        """
        pts = []
        m = 1
        while len(pts) < n:
            r = 1.0 - 4.0 ** (-m)
            j = np.arange(2**m)
            pts.extend(r * np.exp(2j * np.pi * (j + 0.5) / 2**m))
            m += 1
        return cls(np.array(pts[:n]), "disk", "dyadic-tree", {"n": n})


def _points(seq):
    if isinstance(seq, PointSequence):
        return seq.points
    return np.asarray(seq, dtype=complex).ravel()


def gram_model(seq, inner=None):
    """Gram matrix of the normalized kernels ``k_a^I / ||k_a^I||_2``.

    Entry ``(j, k)`` is ``k_{a_j}(a_k) / (||k_{a_j}|| ||k_{a_k}||)``.  The
    denominator ``1 - conj(a) b`` is formed as ``(1 - |a|^2) + conj(a)(a - b)``
    which stays accurate for points crowding the boundary.
    """
    pts = _points(seq)
    n = pts.size
    if n and np.any(pseudo_hyperbolic(pts[:, None], pts[None, :])[~np.eye(n, dtype=bool)] == 0):
        raise DegenerateSequenceError("sequence has coincident points")
    oma = one_minus_abs2(pts)
    den = oma[:, None] + np.conj(pts)[:, None] * (pts[:, None] - pts[None, :])
    if inner is None:
        num = np.ones((n, n), dtype=complex)
        sq = oma
    else:
        vals = np.asarray(eval_inner(inner, pts), dtype=complex)
        num = 1.0 - np.conj(vals)[:, None] * vals[None, :]
        sq = oma / (1.0 - np.abs(vals) ** 2)
    norms = 1.0 / np.sqrt(sq)
    g = num / den / (norms[:, None] * norms[None, :])
    g = as_hermitian(g).copy()
    np.fill_diagonal(g, 1.0)
    g.setflags(write=False)
    return g


@dataclass(frozen=True)
class SpectralSummary:
    N: int
    lambda_min: float
    lambda_max: float
    inv_diag_max: float

    def as_row(self):
        return [self.N, self.lambda_min, self.lambda_max, self.inv_diag_max]


SUMMARY_COLUMNS = ("N", "lambda_min", "lambda_max", "inv_diag_max")


def spectral_summary(gram):
    """Extreme eigenvalues and the largest diagonal entry of the inverse.

    A singular Gram matrix gives ``inv_diag_max = inf`` rather than an error.
    """
    g = as_hermitian(gram)
    n = g.shape[0]
    eig = hermitian_eigenvalues(g)
    try:
        inv = solve_pd(g, np.eye(n))
        inv_diag_max = float(np.max(np.real(np.diagonal(inv))))
    except SingularGramError:
        inv_diag_max = float("inf")
    return SpectralSummary(n, float(eig[0]), float(eig[-1]), inv_diag_max)


def distance_to_span(gram, index=0):
    """Distance from vector ``index`` to the span of the others, by least squares.

    Works on the Gram matrix alone: with ``P`` the projection onto the other
    vectors, ``dist^2 = G_ii - g^* G_rest^{-1} g``.
    """
    g = np.asarray(gram)
    rest = [k for k in range(g.shape[0]) if k != index]
    if not rest:
        return float(np.sqrt(g[index, index].real))
    sub = g[np.ix_(rest, rest)]
    col = g[rest, index]
    coef, *_ = np.linalg.lstsq(sub, col, rcond=None)
    return float(np.sqrt(max(g[index, index].real - np.vdot(col, coef).real, 0.0)))


def hardy_biorthogonal(seq, index, p=2.0, quad=None):
    """``phi_a = (B_a / B_a(a)) (k_a / k_a(a)) ||k_a||_p`` for ``a = seq[index]``.

    ``B_a`` is the Blaschke product over the other points, so ``phi_a``
    vanishes on them and pairs to one with the normalized kernel at ``a``.
    """
    pts = _points(seq)
    a = complex(pts[index])
    others = np.delete(pts, index)
    if np.any(pseudo_hyperbolic(a, others) == 0):
        raise DegenerateSequenceError("point repeats in the sequence")
    ba = InnerFunction.blaschke(others)
    ba_at_a = complex(eval_inner(ba, a))
    ka = KernelSpec(a, None, p)
    scale = kernel_norm(ka, quad) / (ba_at_a * eval_kernel(ka, a))

    def phi(z):
        return scale * eval_inner(ba, z) * eval_kernel(ka, z)

    phi.anchor = a
    return phi


def _grid_size(pts, floor=4096):
    width = float(np.min(one_minus_abs2(pts))) if pts.size else 1.0
    n = floor
    while n < 32.0 / width and n < 2**20:
        n *= 2
    return n


def weak_q_carleson_constant(seq, inner, q, trials=256, seed=DEFAULT_SEED, grid=None):
    """Largest observed ``||sum |mu_a|^2 |k_{q,a}|^2||_{q/2} / ||mu||_q^2``.

    ``k_{q,a}`` is the kernel normalized in ``L^q``.  The search covers the
    coordinate vectors plus ``trials`` random directions on the ``l^q``
    sphere, so the result is a lower bound for the best constant.  All norms
    use one fixed circle grid.
    """
    if q < 2:
        raise ValueError("weak Carleson constant needs q >= 2")
    pts = _points(seq)
    if pts.size == 0:
        return 0.0
    n = grid or _grid_size(pts)
    zeta = circle_grid(n)
    k2 = np.empty((pts.size, n))
    for j, a in enumerate(pts):
        mod = np.abs(eval_kernel(KernelSpec(a, inner, q), zeta))
        k2[j] = (mod / np.mean(mod**q) ** (1.0 / q)) ** 2

    def ratio(mu):
        mu = np.abs(mu) / np.sum(np.abs(mu) ** q) ** (1.0 / q)
        f = (mu**2) @ k2
        return float(np.mean(f ** (q / 2.0)) ** (2.0 / q))

    best = max(ratio(e) for e in np.eye(pts.size))
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        best = max(best, ratio(rng.standard_normal(pts.size)))
    return best


@dataclass(frozen=True)
class WindowReport:
    max_ratio: float
    level: int
    center: float
    windows_tested: int


def _window_meets_level_set(inner, t, h, eps, samples=8):
    r = 1.0 - h * (np.arange(samples) + 0.5) / samples
    th = t + np.pi * h * (2.0 * (np.arange(samples) + 0.5) / samples - 1.0)
    z = r[:, None] * np.exp(1j * th[None, :])
    return bool(np.any(np.abs(eval_inner(inner, z)) < eps))


def geometric_carleson_test(seq, inner, max_level=12, eps=0.5):
    """Largest ``nu(S) / h`` over dyadic windows meeting ``{|I| < eps}``.

    ``nu`` puts mass ``(1 - |a|^2) / (1 - |I(a)|^2)`` at each point.  The
    window at level ``j`` and centre ``t = 2 pi k 2^-j`` is
    ``{r e^{i theta} : 1 - h <= r < 1, |theta - t| <= pi h}``, ``h = 2^-j``,
    so windows of one level tile an annulus.
    """
    pts = _points(seq)
    if pts.size == 0:
        return WindowReport(0.0, 0, 0.0, 0)
    w = one_minus_abs2(pts) / (1.0 - np.abs(np.asarray(eval_inner(inner, pts))) ** 2)
    rad = np.abs(pts)
    ang = np.mod(np.angle(pts), 2.0 * np.pi)
    best = WindowReport(0.0, 0, 0.0, 0)
    tested = 0
    for j in range(max_level + 1):
        h = 2.0**-j
        cells = 2**j
        k = np.floor(np.mod(ang / (2.0 * np.pi * h) + 0.5, cells)).astype(int)
        inside = rad >= 1.0 - h
        mass = np.bincount(k[inside], weights=w[inside], minlength=cells)
        for kk in np.flatnonzero(mass):
            t = 2.0 * np.pi * kk * h
            tested += 1
            if not _window_meets_level_set(inner, t, h, eps):
                continue
            ratio = mass[kk] / h
            if ratio > best.max_ratio:
                best = WindowReport(float(ratio), j, float(t), 0)
    return WindowReport(best.max_ratio, best.level, best.center, tested)


def carleson_summary(seq, inner, q=4.0, trials=256, seed=DEFAULT_SEED, max_level=12):
    """The three separation diagnostics side by side."""
    return {
        "blaschke_delta": blaschke_delta(_points(seq)),
        "weak_q_constant": weak_q_carleson_constant(seq, inner, q, trials, seed),
        "window_ratio": geometric_carleson_test(seq, inner, max_level).max_ratio,
    }
