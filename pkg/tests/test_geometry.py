import math

import numpy as np
import pytest

from mslab.exceptions import DegenerateSequenceError
from mslab.geometry import (
    PointSequence,
    carleson_summary,
    distance_to_span,
    geometric_carleson_test,
    gram_model,
    hardy_biorthogonal,
    spectral_summary,
    weak_q_carleson_constant,
)
from mslab.inner import InnerFunction, eval_inner
from mslab.kernels import KernelSpec, eval_kernel, kernel_norm

I_PI = InnerFunction.singular(math.pi)


def test_sequence_constructors():
    assert PointSequence.exponential(3).points == pytest.approx([0.5, 0.75, 0.875])
    assert len(PointSequence.radial(5)) == 5
    tree = PointSequence.dyadic_tree(6)
    assert np.allclose(np.abs(tree.points), [0.75, 0.75, 0.9375, 0.9375, 0.9375, 0.9375])
    assert tree.head(2).construction == "dyadic-tree"
    with pytest.raises(ValueError):
        PointSequence.exponential(60)
    with pytest.raises(ValueError):
        PointSequence([1.0])


def test_gram_has_unit_diagonal_and_is_hermitian():
    g = gram_model(PointSequence.dyadic_tree(12), I_PI)
    assert np.allclose(np.diag(g), 1.0)
    assert np.allclose(g, g.conj().T)


def test_gram_rejects_coincident_points():
    with pytest.raises(DegenerateSequenceError):
        gram_model([0.5, 0.5])


def test_hardy_gram_spectra_golden(golden):
    for row in golden("disk_gram.csv"):
        seq = getattr(PointSequence, row["sequence"].replace("-", "_"))(row["N"])
        s = spectral_summary(gram_model(seq))
        assert s.lambda_min == pytest.approx(row["lambda_min"], rel=1e-8, abs=1e-13)
        assert s.lambda_max == pytest.approx(row["lambda_max"], rel=1e-10)


def test_dyadic_tree_lambda_min_stays_above_half_of_first():
    first = spectral_summary(gram_model(PointSequence.dyadic_tree(8))).lambda_min
    for n in (16, 32, 64, 128, 256):
        assert spectral_summary(gram_model(PointSequence.dyadic_tree(n))).lambda_min >= 0.5 * first


def test_singular_gram_summary():
    g = np.ones((3, 3))
    assert spectral_summary(g).inv_diag_max == float("inf")


def test_distance_to_span_matches_inverse_diagonal():
    g = gram_model(PointSequence.exponential(6))
    s = spectral_summary(g)
    dists = [distance_to_span(g, k) for k in range(6)]
    assert min(dists) ** -2 == pytest.approx(s.inv_diag_max, rel=1e-8)


def test_hardy_biorthogonal_vanishes_and_pairs():
    seq = PointSequence.exponential(5)
    phi = hardy_biorthogonal(seq, 2)
    others = np.delete(seq.points, 2)
    assert np.max(np.abs(phi(others))) < 1e-12
    a = seq.points[2]
    ka = KernelSpec(a, None, 2.0)
    # <phi, k_a / ||k_a||_2> = phi(a) / ||k_a||_2 = 1 at p = 2
    assert abs(phi(a)) / kernel_norm(ka) == pytest.approx(1.0, rel=1e-10)


def test_weak_q_single_point_is_one():
    assert weak_q_carleson_constant([0.5], I_PI, 4.0, trials=0) == pytest.approx(1.0, rel=1e-12)


def test_weak_q_needs_q_at_least_two():
    with pytest.raises(ValueError):
        weak_q_carleson_constant([0.5], I_PI, 1.5)


def test_carleson_tests_golden(golden):
    rows = {r["sequence"]: r for r in golden("carleson.csv")}
    exp10 = PointSequence.exponential(10)
    summary = carleson_summary(exp10, I_PI)
    assert summary["blaschke_delta"] == pytest.approx(rows["exponential"]["delta"], rel=1e-10)
    assert summary["weak_q_constant"] == pytest.approx(rows["exponential"]["weak_q_lower_bound"], rel=1e-8)
    assert summary["window_ratio"] == pytest.approx(rows["exponential"]["window_ratio"], rel=1e-12)
    radial = geometric_carleson_test(PointSequence.radial(200), I_PI)
    assert radial.max_ratio == pytest.approx(rows["radial"]["window_ratio"], rel=1e-12)
