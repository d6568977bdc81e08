"""Inner functions on the unit disk: Blaschke factors, the atomic singular
inner function and their products, plus a grid probe for sublevel sets."""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .exceptions import DegenerateSequenceError, EvaluationError, SingularityError

POLE_TOL = 1e-14
DISK_SLACK = 1e-12


def one_minus_abs2(a):
    """``1 - |a|^2`` computed as ``(1-|a|)(1+|a|)`` to keep digits near T."""
    r = np.abs(a)
    return (1.0 - r) * (1.0 + r)


def pseudo_hyperbolic(a, b):
    """``|b_a(b)| = |a-b| / |1 - conj(a) b|`` for points of the disk.

    Uses ``|1 - conj(a) b|^2 = |a-b|^2 + (1-|a|^2)(1-|b|^2)`` so points that
    crowd the boundary do not lose precision to cancellation.
    """
    d2 = np.abs(np.subtract(a, b)) ** 2
    return np.sqrt(d2 / (d2 + one_minus_abs2(a) * one_minus_abs2(b)))


def _as_points(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise EvaluationError("non-finite evaluation point")
    if np.any(np.abs(z) > 1.0 + DISK_SLACK):
        raise EvaluationError("evaluation point outside the closed disk")
    return z


def _unimodular_prefactor(a):
    # |a|/a written as exp(-i arg a): stays unimodular for subnormal a
    return cmath.exp(-1j * cmath.phase(a))


def eval_blaschke_factor(a, z):
    """``b_a(z) = (|a|/a) (a - z) / (1 - conj(a) z)`` with ``b_0(z) = z``."""
    z = _as_points(z)
    a = complex(a)
    if abs(a) >= 1.0:
        raise EvaluationError(f"Blaschke zero {a} not in the open disk")
    if a == 0:
        return z.copy() if z.ndim else complex(z)
    den = 1.0 - np.conj(a) * z
    if np.any(np.abs(den) <= POLE_TOL):
        raise EvaluationError("evaluation too close to the pole of b_a")
    out = _unimodular_prefactor(a) * (a - z) / den
    return out if np.ndim(out) else complex(out)


@dataclass(frozen=True)
class InnerFunction:
    """Finite Blaschke product times a power of the atom at ``zeta = 1``.

    ``I(z) = prod_k b_{a_k}(z) * exp(power * 2 * mass * (z+1)/(z-1))``.
    """

    zeros: tuple = ()
    mass: float = 0.0
    power: float = 1.0
    _zeros_arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        zs = np.array([complex(a) for a in self.zeros], dtype=complex)
        if zs.size and np.any(np.abs(zs) >= 1.0):
            raise ValueError("Blaschke zeros must lie in the open disk")
        if not (np.isfinite(self.mass) and self.mass >= 0):
            raise ValueError(f"singular mass must be finite and >= 0, got {self.mass}")
        if not (np.isfinite(self.power) and self.power >= 0):
            raise ValueError(f"power must be finite and >= 0, got {self.power}")
        zs.setflags(write=False)
        object.__setattr__(self, "zeros", tuple(complex(a) for a in zs))
        object.__setattr__(self, "mass", float(self.mass))
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "_zeros_arr", zs)

    @classmethod
    def singular(cls, tau, power=1.0):
        """``I_tau(z)^power`` with ``I_tau(z) = exp(2 tau (z+1)/(z-1))``."""
        return cls((), tau, power)

    @classmethod
    def blaschke(cls, zeros):
        return cls(tuple(zeros), 0.0, 1.0)

    @property
    def exponent(self):
        """Total singular weight ``2 * mass * power``."""
        return 2.0 * self.mass * self.power

    @property
    def has_singular_part(self):
        return self.exponent > 0.0

    def blaschke_part(self):
        return InnerFunction(self.zeros, 0.0, 1.0)

    def singular_part(self):
        return InnerFunction((), self.mass, self.power)

    def with_power(self, power):
        """Same zeros, singular part raised to ``power``."""
        return InnerFunction(self.zeros, self.mass, power)

    def __mul__(self, other):
        if not isinstance(other, InnerFunction):
            return NotImplemented
        zeros = self.zeros + other.zeros
        if self.power == other.power:
            return InnerFunction(zeros, self.mass + other.mass, self.power)
        return InnerFunction(zeros, 0.5 * (self.exponent + other.exponent), 1.0)

    def __call__(self, z):
        return eval_inner(self, z)

    def to_dict(self):
        return {
            "zeros": [[a.real, a.imag] for a in self.zeros],
            "mass": self.mass,
            "power": self.power,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data):
        zeros = tuple(complex(re, im) for re, im in data.get("zeros", []))
        return cls(zeros, data.get("mass", 0.0), data.get("power", 1.0))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def eval_inner(inner, z):
    """Evaluate ``inner`` at points of the closed disk.

    The singular factor is undefined at ``z = 1``; evaluating there raises
    :class:`SingularityError`.
    """
    if isinstance(z, (complex, float, int)):
        return _eval_inner_scalar(inner, complex(z))
    z = _as_points(z)
    out = np.ones_like(z)
    for a in inner._zeros_arr:
        if a == 0:
            out = out * z
            continue
        den = 1.0 - np.conj(a) * z
        if np.any(np.abs(den) <= POLE_TOL):
            raise EvaluationError("evaluation too close to a Blaschke pole")
        out = out * (_unimodular_prefactor(a) * (a - z) / den)
    if inner.has_singular_part:
        gap = z - 1.0
        if np.any(np.abs(gap) <= POLE_TOL):
            raise SingularityError("singular inner function evaluated at z = 1")
        out = out * np.exp(inner.exponent * (z + 1.0) / gap)
    return out if np.ndim(out) else complex(out)


def _eval_inner_scalar(inner, z):
    # plain complex arithmetic; numpy overhead dominates for single points
    if not (cmath.isfinite(z) and abs(z) <= 1.0 + DISK_SLACK):
        raise EvaluationError(f"evaluation point {z} outside the closed disk")
    out = 1.0 + 0j
    for a in inner.zeros:
        if a == 0:
            out *= z
            continue
        den = 1.0 - a.conjugate() * z
        if abs(den) <= POLE_TOL:
            raise EvaluationError("evaluation too close to a Blaschke pole")
        out *= _unimodular_prefactor(a) * (a - z) / den
    if inner.has_singular_part:
        gap = z - 1.0
        if abs(gap) <= POLE_TOL:
            raise SingularityError("singular inner function evaluated at z = 1")
        out *= cmath.exp(inner.exponent * (z + 1.0) / gap)
    return out


def blaschke_delta(points):
    """``min_a prod_{u != a} |b_u(a)|``, the separation constant of a finite set."""
    pts = np.asarray(points, dtype=complex).ravel()
    if pts.size <= 1:
        return 1.0
    rho = pseudo_hyperbolic(pts[:, None], pts[None, :])
    np.fill_diagonal(rho, 1.0)
    if np.any(rho == 0.0):
        raise DegenerateSequenceError("sequence has coincident points")
    return float(np.exp(np.min(np.sum(np.log(rho), axis=1))))


@dataclass(frozen=True)
class LevelSetProbe:
    """Grid evidence about ``{z : |I(z)| < epsilon}``; a heuristic, not a proof."""

    epsilon: float
    resolution: int
    components: int
    connected: bool
    marked_cells: int
    heuristic: bool = True


def _polar_samples(resolution, supersample):
    k = (np.arange(supersample) + 0.5) / supersample
    r = ((np.arange(resolution)[:, None] + k[None, :]) / resolution).ravel()
    t = (2.0 * np.pi * (np.arange(resolution)[:, None] + k[None, :]) / resolution).ravel()
    return r, t


def probe_level_set(inner, epsilon, resolution=256, supersample=3):
    """Count connected components of the sublevel set on a polar grid.

    Cells are ``resolution`` radial bands by ``resolution`` angular sectors;
    a cell is marked when any of its ``supersample**2`` samples lies below
    ``epsilon``.  Components use 4-connectivity, wrap around in angle and
    are joined through the centre for cells in the innermost band.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    r, t = _polar_samples(resolution, supersample)
    z = r[:, None] * np.exp(1j * t[None, :])
    mod = np.abs(eval_inner(inner, z))
    mod = mod.reshape(resolution, supersample, resolution, supersample)
    marked = mod.min(axis=(1, 3)) < epsilon

    labels, count = ndimage.label(marked)
    if count == 0:
        return LevelSetProbe(float(epsilon), resolution, 0, False, 0)
    parent = list(range(count + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        if x and y:
            parent[find(x)] = find(y)

    for i in range(resolution):
        union(labels[i, 0], labels[i, -1])
    inner_ring = [lab for lab in labels[0] if lab]
    for lab in inner_ring[1:]:
        union(lab, inner_ring[0])
    roots = {find(lab) for lab in range(1, count + 1)}
    return LevelSetProbe(
        float(epsilon), resolution, len(roots), len(roots) == 1, int(marked.sum())
    )
