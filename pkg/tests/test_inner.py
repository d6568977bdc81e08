import cmath
import math

import numpy as np
import pytest

from mslab.exceptions import DegenerateSequenceError, EvaluationError, SingularityError
from mslab.inner import (
    InnerFunction,
    blaschke_delta,
    eval_blaschke_factor,
    eval_inner,
    one_minus_abs2,
    probe_level_set,
    pseudo_hyperbolic,
)


def test_blaschke_factor_at_origin_is_identity():
    z = np.array([0.3, -0.2j, 0.5 + 0.5j])
    assert np.allclose(eval_blaschke_factor(0, z), z)


def test_blaschke_factor_vanishes_at_zero_and_is_unimodular():
    a = 0.5j
    assert abs(eval_blaschke_factor(a, a)) == 0
    assert abs(eval_blaschke_factor(a, cmath.exp(1j * math.pi / 3))) == pytest.approx(1.0, abs=1e-14)


def test_blaschke_factor_value_at_origin():
    # b_a(0) = |a|
    assert eval_blaschke_factor(0.3 - 0.4j, 0.0) == pytest.approx(0.5)


def test_blaschke_factor_rejects_bad_input():
    with pytest.raises(EvaluationError):
        eval_blaschke_factor(1.0, 0.1)
    with pytest.raises(EvaluationError):
        eval_blaschke_factor(0.1, 2.0)


def test_singular_inner_at_origin():
    assert abs(eval_inner(InnerFunction.singular(math.pi), 0.0)) == pytest.approx(math.exp(-2 * math.pi))
    assert abs(eval_inner(InnerFunction.singular(math.pi, 1.5), 0.0)) == pytest.approx(math.exp(-3 * math.pi))


def test_singular_inner_on_real_axis():
    # |I_pi(0.5)| = exp(2 pi (a+1)/(a-1)) = exp(-6 pi)
    assert abs(eval_inner(InnerFunction.singular(math.pi), 0.5)) == pytest.approx(math.exp(-6 * math.pi), rel=1e-12)


def test_singular_point_raises():
    with pytest.raises(SingularityError):
        eval_inner(InnerFunction.singular(1.0), 1.0)
    with pytest.raises(SingularityError):
        eval_inner(InnerFunction.singular(1.0), np.array([0.0, 1.0]))


def test_scalar_and_vector_paths_agree():
    inner = InnerFunction((0.5, -0.3j, 0.0), 0.7, 1.3)
    z = np.array([0.1 + 0.2j, -0.6, 0.9j])
    assert np.allclose(eval_inner(inner, z), [eval_inner(inner, complex(w)) for w in z], rtol=1e-14)


def test_product_of_inner_functions():
    a, b = InnerFunction((0.5,), 1.0), InnerFunction((-0.2j,), 0.5)
    z = np.array([0.3, 0.1j])
    assert np.allclose(eval_inner(a * b, z), eval_inner(a, z) * eval_inner(b, z))
    c = InnerFunction.singular(1.0, 0.5) * InnerFunction.singular(1.0, 2.0)
    assert c.exponent == pytest.approx(5.0)


def test_json_round_trip():
    inner = InnerFunction((0.5 + 0.1j,), 2.0, 0.5)
    assert InnerFunction.from_json(inner.to_json()) == inner


def test_invalid_parameters():
    with pytest.raises(ValueError):
        InnerFunction((1.2,))
    with pytest.raises(ValueError):
        InnerFunction.singular(-1.0)


def test_pseudo_hyperbolic_precision_near_boundary():
    a, b = 1 - 2.0**-40, 1 - 2.0**-41
    # exact: (a-b)/(1-ab) computed in rationals is 1/3 to leading order
    assert pseudo_hyperbolic(a, b) == pytest.approx(1 / 3, rel=1e-9)
    assert one_minus_abs2(1 - 2.0**-40) == pytest.approx(2.0**-39, rel=1e-11)


def test_blaschke_delta_two_points():
    assert blaschke_delta([0.0, 0.5]) == pytest.approx(0.5)
    assert blaschke_delta([0.3]) == 1.0


def test_blaschke_delta_exponential_golden(golden):
    for row in golden("blaschke_delta.csv"):
        pts = 1 - 2.0 ** -np.arange(1, row["n"] + 1)
        assert blaschke_delta(pts) == pytest.approx(row["delta"], rel=1e-10)


def test_blaschke_delta_duplicates():
    with pytest.raises(DegenerateSequenceError):
        blaschke_delta([0.5, 0.5])


def test_level_set_probe_components():
    assert probe_level_set(InnerFunction.singular(math.pi), 0.5).components == 1
    assert probe_level_set(InnerFunction.blaschke([0.9, -0.9]), 0.05).components == 2
    probe = probe_level_set(InnerFunction.blaschke([0.0]), 0.5)
    assert probe.connected and probe.heuristic
