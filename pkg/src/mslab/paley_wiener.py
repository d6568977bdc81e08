"""Paley-Wiener side: perturbed-integer sequences, sinc Gram matrices, the
generating product G, A_p functionals, densities and finite sinc sums."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad
from scipy.special import zeta

from .exceptions import DegenerateSequenceError, IntegrationError, PreconditionError
from .numerics import QuadratureSpec, integrate_line

FAMILIES = ("integers", "quarter-shift", "schuster-seip", "narrowed", "custom")
PP_LINE = QuadratureSpec(domain="real-line", tol=1e-4, node_count=256)


def conjugate_exponent(p):
    if p == math.inf:
        return 1.0
    if not p > 1.0:
        raise ValueError(f"exponent must exceed 1, got {p}")
    return p / (p - 1.0)


@dataclass(frozen=True)
class PWSequenceSpec:
    """A real sequence ``gamma_k = k + delta_k`` for ``k = -K..K``.

    ``delta_k = sign(k) * shift`` with ``shift`` fixed by the family:
    ``1/4`` (quarter-shift), ``1/(2 max(p, p'))`` (schuster-seip),
    ``-1/(2 s')`` (narrowed), ``0`` (integers).  ``custom`` takes explicit
    points.
    """

    family: str = "integers"
    param: float | None = None
    K: int = 128
    custom: tuple = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown sequence family {self.family!r}")
        if self.family in ("schuster-seip", "narrowed"):
            if self.param is None or not self.param > 1.0:
                raise ValueError(f"{self.family} needs an exponent > 1")
        if self.K < 1:
            raise ValueError("truncation K must be positive")

    @classmethod
    def parse(cls, text, K=128):
        """``"schuster-seip:p=4"``, ``"narrowed:s=1.5"``, ``"quarter-shift"``, ``"integers"``."""
        m = re.fullmatch(r"\s*([a-z-]+)\s*(?::\s*([a-z]+)\s*=\s*([0-9.eE+-]+))?\s*", text)
        if not m:
            raise ValueError(f"cannot parse sequence family {text!r}")
        family, key, value = m.groups()
        expected = {"schuster-seip": "p", "narrowed": "s"}.get(family)
        if expected is not None and key != expected:
            raise ValueError(f"{family} expects parameter {expected}=...")
        if expected is None and key is not None:
            raise ValueError(f"{family} takes no parameter")
        return cls(family, float(value) if value else None, K)

    @property
    def name(self):
        if self.family == "schuster-seip":
            return f"schuster-seip:p={self.param:g}"
        if self.family == "narrowed":
            return f"narrowed:s={self.param:g}"
        return self.family

    @property
    def shift(self):
        if self.family == "quarter-shift":
            return 0.25
        if self.family == "schuster-seip":
            p = self.param
            return 1.0 / (2.0 * max(p, conjugate_exponent(p)))
        if self.family == "narrowed":
            return -1.0 / (2.0 * conjugate_exponent(self.param))
        return 0.0

    @property
    def magnitude_exponent(self):
        """Power ``beta`` in ``|G(x)| ~ d(x, Gamma) (1 + |x|)^beta``."""
        return -2.0 * self.shift

    def with_K(self, K):
        return replace(self, K=K)

    def points(self):
        if self.family == "custom":
            pts = np.sort(np.asarray(self.custom, dtype=float))
        else:
            k = np.arange(-self.K, self.K + 1)
            pts = k + np.sign(k) * self.shift
        if np.any(np.diff(pts) <= 0):
            raise DegenerateSequenceError("sequence points must be distinct")
        return pts

    def centered(self, n):
        """``n`` consecutive points around the origin; truncations are nested."""
        pts = self.points()
        mid = int(np.searchsorted(pts, 0.0))
        lo = mid - n // 2
        if lo < 0 or lo + n > pts.size:
            raise ValueError(f"truncation K={self.K} too small for {n} centred points")
        return pts[lo:lo + n]


def _as_real_points(seq):
    if isinstance(seq, PWSequenceSpec):
        return seq.points()
    return np.asarray(seq, dtype=float).ravel()


def pw_gram(seq, tau=np.pi):
    """Normalized sinc Gram matrix ``sin(tau d) / (tau d)``, ``d = gamma_j - gamma_k``."""
    if not tau > 0:
        raise ValueError("type tau must be positive")
    pts = _as_real_points(seq)
    d = pts[:, None] - pts[None, :]
    off = ~np.eye(pts.size, dtype=bool)
    if np.any(d[off] == 0):
        raise DegenerateSequenceError("coincident points in sequence")
    g = np.sinc(tau * d / np.pi)
    g.setflags(write=False)
    return g


def _hurwitz_tail(z2, start, terms_tol=1e-17, max_terms=400):
    """``sum_{k >= 0} log(1 - z2 / (start + k)^2)`` via the Hurwitz zeta series."""
    total = 0j
    ratio = z2 / start**2
    if abs(ratio) >= 1:
        raise PreconditionError("tail series needs |z| below the truncation point")
    for m in range(1, max_terms):
        term = z2**m / m * zeta(2 * m, start)
        total -= term
        if abs(term) < terms_tol * max(1.0, abs(total)):
            return total
    raise IntegrationError("tail series did not converge")


def generating_function_eval(seq, z, tail=True):
    """``G(z) = z prod_{k=1..K} (1 - z/gamma_k)(1 - z/gamma_{-k})``.

    Factors are paired symmetrically and accumulated as log-modulus plus
    phase.  With ``tail`` the missing factors ``k > K`` are restored through
    ``sum_m z^{2m}/m zeta_H(2m, K + 1 + shift)``, valid for generated
    (odd-symmetric) families.
    """
    if isinstance(seq, PWSequenceSpec):
        pts, spec = seq.points(), seq
    else:
        pts, spec = _as_real_points(seq), None
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    mid = int(np.searchsorted(pts, 0.0))
    if pts[mid] != 0.0:
        raise ValueError("sequence must contain 0")
    pos = pts[mid + 1:]
    neg = pts[:mid][::-1]
    k = min(pos.size, neg.size)
    pos, neg = pos[:k], neg[:k]
    out = np.empty(zs.shape, dtype=complex)
    for i, zz in enumerate(zs):
        fac = (1.0 - zz / pos) * (1.0 - zz / neg)
        if zz == 0 or np.any(fac == 0):
            out[i] = 0.0
            continue
        logs = np.sum(np.log(fac)) + np.log(zz)
        if tail and spec is not None and spec.family != "custom":
            logs += _hurwitz_tail(zz * zz, k + 1 + spec.shift)
        if logs.real > 709.0:
            raise OverflowError("generating function overflows double precision")
        out[i] = np.exp(logs)
    return out if np.ndim(z) else complex(out[0])


@dataclass(frozen=True)
class MagnitudeReport:
    min_ratio: float
    max_ratio: float
    exponent: float
    samples: int

    @property
    def band(self):
        return self.max_ratio / self.min_ratio


def distance_to_sequence(x, pts):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    idx = np.clip(np.searchsorted(pts, x), 1, pts.size - 1)
    return np.minimum(np.abs(x - pts[idx - 1]), np.abs(x - pts[idx]))


def schuster_seip_magnitude_check(seq, xs, min_distance=0.05):
    """Band of ``|G(x)| / (d(x, Gamma) (1 + |x|)^beta)`` over sample points."""
    pts = seq.points()
    xs = np.asarray(xs, dtype=float)
    d = distance_to_sequence(xs, pts)
    if np.any(d < min_distance):
        raise PreconditionError(f"sample within {min_distance} of the sequence")
    beta = seq.magnitude_exponent
    ratio = np.abs(generating_function_eval(seq, xs)) / (d * (1.0 + np.abs(xs)) ** beta)
    return MagnitudeReport(float(ratio.min()), float(ratio.max()), beta, xs.size)


def muckenhoupt_ap(F, p, intervals):
    """``avg_I F^p * (avg_I F^{-p'})^{p-1}`` for each interval ``I = (a, b)``."""
    pc = conjugate_exponent(p)
    out = []
    for a, b in intervals:
        length = b - a
        if not length > 0:
            raise ValueError("intervals must have positive length")
        opts = dict(limit=500, epsabs=0.0, epsrel=1e-12)
        up, err1 = quad(lambda t: F(t) ** p, a, b, **opts)
        dn, err2 = quad(lambda t: F(t) ** (-pc), a, b, **opts)
        if err1 > 1e-8 * abs(up) or err2 > 1e-8 * abs(dn):
            raise IntegrationError(f"A_p quadrature on ({a}, {b}) inaccurate", (up, dn))
        out.append((up / length) * (dn / length) ** (p - 1.0))
    return np.array(out)


def power_weight(beta):
    """``t -> (1 + |t|)^beta``."""
    return lambda t: (1.0 + abs(t)) ** beta


def upper_density(points, radii, step=0.01):
    """Sliding-window maximal counts ``n+(r) / r``.

    Windows are closed intervals ``[s, s + r]`` with starts on a grid of
    spacing ``step``.  Returns the value at the largest radius and the table
    of ``(r, n+(r), n+(r)/r)``.
    """
    pts = np.sort(_as_real_points(points))
    table = []
    eps = 1e-9
    for r in sorted(radii):
        starts = np.arange(pts[0] - r, pts[-1] + step, step)
        counts = np.searchsorted(pts, starts + r + eps, "right") - np.searchsorted(pts, starts - eps, "left")
        n = int(counts.max())
        table.append((float(r), n, n / r))
    return table[-1][2], table


def _sinc(w):
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 1e-8
    safe = np.where(small, 1.0, w)
    return np.where(small, 1.0 - w * w / 6.0, np.sin(safe) / safe)


@dataclass(frozen=True)
class PWFunction:
    """``f(z) = sum_j c_j sinc(tau (z - i shift - x_j))``, a finite kernel sum.

    ``shift`` records translations ``f -> f(. - i a)``.
    """

    centers: tuple
    coeffs: tuple
    tau: float = np.pi
    shift: float = 0.0

    def __post_init__(self):
        if len(self.centers) != len(self.coeffs):
            raise ValueError("centers and coeffs differ in length")
        object.__setattr__(self, "centers", tuple(float(x) for x in self.centers))
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex) - 1j * self.shift
        x = np.asarray(self.centers)
        c = np.asarray(self.coeffs)
        out = _sinc(self.tau * (z[..., None] - x)) @ c
        return out if np.ndim(out) else complex(out)

    def norm2_exact(self):
        """``||f||_2^2`` on the real line, from the sinc Gram matrix (unshifted)."""
        c = np.asarray(self.coeffs)
        g = pw_gram(self.centers, self.tau) * (np.pi / self.tau)
        return float(np.real(np.conj(c) @ g @ c))


def translate(f, a):
    """``Phi_a f : z -> f(z - i a)``."""
    return replace(f, shift=f.shift + a)


def line_norm2(f, a=0.0, spec=PP_LINE):
    """``int_R |f(x + i a)|^2 dx`` by line quadrature."""
    return integrate_line(lambda x: np.abs(f(x + 1j * a)) ** 2, spec)


def plancherel_polya_check(f, a, spec=PP_LINE):
    """``int |f(x + i a)|^2 dx / (e^{2 tau |a|} int |f(x)|^2 dx)``; at most one."""
    if abs(a) > 3:
        raise PreconditionError("shift |a| must not exceed 3")
    num = line_norm2(f, a, spec)
    den = line_norm2(f, 0.0, spec)
    return num / (np.exp(2.0 * f.tau * abs(a)) * den)


def cayley_transfer(f, p, x):
    """``(1 / (pi (x + i)^2))^{1/p} f((x - i) / (x + i))``, principal branch."""
    x = np.asarray(x, dtype=float)
    w = x + 1j
    v = 1.0 / (np.pi * w * w)
    # a signed zero imaginary part would pick the wrong side of the cut
    v = np.where(v.imag == 0, v.real + 0j, v)
    out = np.power(v, 1.0 / p) * f((x - 1j) / w)
    return out if np.ndim(out) else complex(out)
