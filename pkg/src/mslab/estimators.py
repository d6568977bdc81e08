"""Estimator-style wrappers: Gram spectra and model-space interpolation.

Only the pieces that really are "fit on points, then query" get this shape;
the rest of the package is plain functions.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_disk_points, check_exponent, check_real_points
from .geometry import gram_model, spectral_summary
from .inner import InnerFunction
from .interpolation import ExponentTriple, InterpolationProblem, build_interpolant, dual_family_p2
from .paley_wiener import pw_gram


class GramSpectrum(BaseEstimator):
    """Spectral summary of the normalized kernel Gram matrix of ``X``.

    space="disk" uses model-space kernels (Hardy kernels when ``inner`` is
    None); space="paley-wiener" uses sinc kernels of type ``tau``.
    """

    def __init__(self, space="disk", inner=None, tau=np.pi):
        self.space = space
        self.inner = inner
        self.tau = tau

    def fit(self, X, y=None):
        if self.space == "disk":
            pts = check_disk_points(X)
            self.gram_ = np.asarray(gram_model(pts, self.inner))
        elif self.space == "paley-wiener":
            pts = check_real_points(X)
            self.gram_ = np.asarray(pw_gram(pts, check_exponent(self.tau, "tau", low=0.0)))
        else:
            raise ValueError(f"unknown space {self.space!r}")
        summary = spectral_summary(self.gram_)
        self.n_points_ = summary.N
        self.lambda_min_ = summary.lambda_min
        self.lambda_max_ = summary.lambda_max
        self.inv_diag_max_ = summary.inv_diag_max
        return self

    def transform(self, X=None):
        """The fitted summary as a one-row array ``[N, lambda_min, lambda_max, inv_diag_max]``."""
        check_is_fitted(self, "gram_")
        return np.array([[self.n_points_, self.lambda_min_, self.lambda_max_, self.inv_diag_max_]])


class ModelSpaceInterpolator(BaseEstimator):
    """Interpolate weighted values on disk points in ``K^s_J``, ``J = I E``.

    ``fit(X, y)`` builds ``h`` with ``h(a) = y_a ||k^J_a||_{s'}``;
    ``predict(Z)`` evaluates ``h`` at new points.
    """

    def __init__(self, inner=None, outer=None, p=2.0, s=1.2):
        self.inner = inner
        self.outer = outer
        self.p = p
        self.s = s

    def fit(self, X, y):
        pts = check_disk_points(X)
        nu = np.asarray(y, dtype=complex).ravel()
        if nu.size != pts.size:
            raise ValueError("X and y differ in length")
        I = self.inner or InnerFunction.singular(np.pi)
        E = self.outer or I.with_power(0.5)
        triple = ExponentTriple.from_ps(self.p, self.s)
        problem = InterpolationProblem(pts, nu, triple, I, E)
        self.dual_ = dual_family_p2(pts, I, triple.p)
        self.interpolant_ = build_interpolant(problem, self.dual_)
        self.nu_ = nu
        self.points_ = pts
        return self

    def predict(self, Z):
        check_is_fitted(self, "interpolant_")
        z = np.asarray(Z, dtype=complex).ravel()
        return self.interpolant_(z, self.nu_)
