import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import linalg

from mslab.geometry import PointSequence, distance_to_span, gram_model, spectral_summary
from mslab.inner import InnerFunction, blaschke_delta, eval_inner, probe_level_set, pseudo_hyperbolic
from mslab.interpolation import ExponentTriple, factorize_target, lp_norm
from mslab.kernels import KernelSpec, eval_kernel, kernel_inner_product, kernel_norm
from mslab.numerics import hermitian_eigenvalues, integrate_circle, solve_pd
from mslab.paley_wiener import PWFunction, PWSequenceSpec, pw_gram
from mslab.reporting import format_value

FAST = settings(max_examples=25, deadline=None)

radius = st.floats(0.0, 0.97)
angle = st.floats(0.0, 2 * math.pi)
disk_point = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), radius, angle)
zeros = st.lists(disk_point, max_size=3)
inner_fn = st.builds(InnerFunction, zeros.map(tuple), st.floats(0.0, 2.0), st.floats(0.25, 2.0))


def hermitian(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


@FAST
@given(st.integers(1, 24), st.integers(0, 2**32 - 1))
def test_jacobi_permutation_invariant(n, seed):
    h = hermitian(n, seed)
    perm = np.random.default_rng(seed + 1).permutation(n)
    ev = hermitian_eigenvalues(h)
    assert np.allclose(ev, hermitian_eigenvalues(h[np.ix_(perm, perm)]), atol=1e-10)
    assert np.allclose(ev, linalg.eigvalsh(h), atol=1e-10)


@FAST
@given(st.integers(1, 30), st.integers(0, 2**32 - 1))
def test_solve_pd_multiply_back(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    g = a @ a.conj().T + n * np.eye(n)
    b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x = solve_pd(g, b)
    assert np.linalg.norm(g @ x - b) <= 1e-9 * np.linalg.norm(b)


@FAST
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=12))
def test_trapezoid_exact_on_trig_polynomials(coeffs):
    c = np.array([complex(x, y) for x, y in coeffs])
    deg = c.size - 1
    from mslab.numerics import QuadratureSpec

    nodes = max(8, 1 << (2 * deg + 1).bit_length())
    spec = QuadratureSpec(node_count=nodes, max_nodes=8 * nodes, tol=1e-13)
    # mean of sum c_k z^k over T is c_0
    got = integrate_circle(lambda z: np.polyval(c[::-1], z), spec)
    assert abs(got - c[0]) <= 1e-13 * max(1.0, np.abs(c).sum())


@FAST
@given(inner_fn, st.floats(0.0, 2 * math.pi))
def test_inner_unimodular_on_circle(inner, t):
    assume(abs(complex(math.cos(t), math.sin(t)) - 1) > 1e-3)
    assert abs(abs(eval_inner(inner, complex(math.cos(t), math.sin(t)))) - 1) <= 1e-9


@FAST
@given(st.floats(0.1, 3.0), st.floats(0.0, 1.0), disk_point)
def test_singular_exponent_additivity(tau, eps, z):
    base = InnerFunction.singular(tau)
    lhs = eval_inner(base.with_power(1 + eps), z)
    rhs = eval_inner(base, z) * eval_inner(base.with_power(eps), z)
    assert abs(lhs - rhs) <= 1e-12


@FAST
@given(st.lists(disk_point, min_size=2, max_size=8, unique=True), angle, st.randoms(use_true_random=False))
def test_delta_permutation_and_rotation(points, theta, rnd):
    pts = np.array(points)
    assume(np.min(pseudo_hyperbolic(pts[:, None], pts[None, :]) + np.eye(pts.size)) > 1e-6)
    d = blaschke_delta(pts)
    shuffled = list(pts)
    rnd.shuffle(shuffled)
    assert blaschke_delta(shuffled) == pytest.approx(d, rel=1e-9, abs=1e-300)
    assert blaschke_delta(pts * np.exp(1j * theta)) == pytest.approx(d, rel=1e-9, abs=1e-300)


@FAST
@given(disk_point, disk_point)
def test_pseudo_hyperbolic_symmetric_and_bounded(a, b):
    d = pseudo_hyperbolic(a, b)
    assert 0 <= d < 1
    assert d == pytest.approx(pseudo_hyperbolic(b, a), rel=1e-12, abs=1e-15)


@settings(max_examples=6, deadline=None)
@given(st.lists(st.tuples(st.floats(0.3, 0.9), angle), min_size=1, max_size=2))
def test_level_set_components_monotone(zs):
    inner = InnerFunction.blaschke([r * complex(math.cos(t), math.sin(t)) for r, t in zs])
    probes = [probe_level_set(inner, e, resolution=64, supersample=2) for e in (0.05, 0.2, 0.5, 0.9)]
    # a coarse grid can miss a zero entirely at small epsilon; only nonempty probes are comparable
    counts = [p.components for p in probes if p.marked_cells]
    assert all(b <= a for a, b in zip(counts, counts[1:]))


@settings(max_examples=20, deadline=None)
@given(disk_point, disk_point, st.one_of(st.builds(InnerFunction.blaschke, zeros), st.builds(InnerFunction.singular, st.floats(0.1, 3.0))))
def test_reproducing_identity(a, b, inner):
    got = kernel_inner_product(a, b, inner)
    assert abs(got - eval_kernel(KernelSpec(a, inner), b)) <= 1e-8


@FAST
@given(st.integers(2, 40), st.integers(0, 2**32 - 1), st.sampled_from([None, InnerFunction.singular(math.pi)]))
def test_gram_psd_and_unit_diagonal(n, seed, inner):
    rng = np.random.default_rng(seed)
    pts = 0.95 * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    assume(np.min(pseudo_hyperbolic(pts[:, None], pts[None, :]) + np.eye(n)) > 1e-3)
    g = gram_model(pts, inner)
    assert np.allclose(np.diag(g), 1.0)
    assert hermitian_eigenvalues(g)[0] >= -1e-10


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["dyadic-tree", "exponential"]), st.integers(3, 24))
def test_truncation_monotone(kind, n):
    seq = getattr(PointSequence, kind.replace("-", "_"))(n)
    small, big = spectral_summary(gram_model(seq.head(n - 1))), spectral_summary(gram_model(seq))
    assert big.lambda_min <= small.lambda_min + 1e-12
    assert big.lambda_max >= small.lambda_max - 1e-12
    assert big.inv_diag_max >= small.inv_diag_max * (1 - 1e-9)


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 20))
def test_delta_n_equals_least_squares_distance(n):
    g = gram_model(PointSequence.dyadic_tree(n))
    s = spectral_summary(g)
    dists = np.array([distance_to_span(g, k) for k in range(n)])
    assert 1 / math.sqrt(s.inv_diag_max) == pytest.approx(dists.min(), rel=1e-8)


@FAST
@given(st.sampled_from(["quarter-shift", "schuster-seip:p=4", "narrowed:s=1.5"]), st.integers(2, 64), st.floats(0.5, 1.5))
def test_pw_gram_reflection(family, n, mult):
    pts = PWSequenceSpec.parse(family, 64).centered(n)
    g, h = pw_gram(pts, mult * math.pi), pw_gram(-pts[::-1], mult * math.pi)
    assert np.allclose(g, h[::-1, ::-1], atol=1e-15)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sampling_bound_by_upper_frame_constant(seed):
    rng = np.random.default_rng(seed)
    f = PWFunction(tuple(rng.uniform(-20, 20, 4)), tuple(rng.standard_normal(4)))
    pts = PWSequenceSpec("quarter-shift", K=256).centered(256)
    lam_max = spectral_summary(pw_gram(pts)).lambda_max
    assert np.sum(np.abs(f(pts)) ** 2) <= lam_max * f.norm2_exact() * (1 + 1e-9)


@FAST
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=1, max_size=10), st.floats(1.05, 1.9))
def test_factorization_identity(vals, s):
    nu = np.array([complex(x, y) for x, y in vals])
    triple = ExponentTriple.from_ps(2.0, s)
    lam, mu = factorize_target(nu, triple)
    assert np.allclose(lam * mu, nu, rtol=1e-12, atol=1e-300)
    assert lp_norm(lam, triple.p) * lp_norm(mu, triple.q) == pytest.approx(lp_norm(nu, s), rel=1e-12)


@settings(max_examples=8, deadline=None)
@given(st.floats(1.2, 4.0))
def test_hardy_norm_scaling(p):
    vals = [kernel_norm(KernelSpec(1 - 2.0**-j, None, p)) * (1 - (1 - 2.0**-j) ** 2) ** (1 - 1 / p) for j in (6, 8, 10)]
    assert vals[2] > 0
    assert abs(vals[2] - vals[1]) <= abs(vals[1] - vals[0]) + 1e-9


@FAST
@given(st.floats(allow_nan=False, allow_infinity=False))
def test_csv_float_round_trip(x):
    assert float(format_value(x)) == x
