import math

import numpy as np
import pytest

from mslab.exceptions import BoundaryDegenerateError
from mslab.inner import InnerFunction, eval_inner
from mslab.kernels import (
    KernelSpec,
    aleksandrov_surrogate,
    eval_kernel,
    kernel_diagonal,
    kernel_inner_product,
    kernel_norm,
    kernel_sup_norm,
    norm_estimate,
    trace_norm,
    trace_weights,
)

I_PI = InnerFunction.singular(math.pi)


def test_hardy_kernel_closed_form_norm():
    a = 0.9
    assert kernel_norm(KernelSpec(a, None, 2.0)) == pytest.approx((1 - a * a) ** -0.5, rel=1e-10)


def test_hardy_kernel_norms_golden(golden):
    for row in golden("hardy_norms.csv"):
        got = kernel_norm(KernelSpec(row["a"], None, row["p"]))
        assert got == pytest.approx(row["norm"], rel=1e-8)


def test_model_kernel_norms_golden(golden):
    for row in golden("kernel_norms.csv"):
        got = kernel_norm(KernelSpec(row["a"], I_PI, row["p"]))
        assert got == pytest.approx(row["norm"], rel=1e-8)


def test_model_kernel_at_origin_p4():
    # k_0 = 1 - conj(I(0)) I(z); mean-value property gives ||k_0||_4^4 = 1 - |I(0)|^4
    c = abs(eval_inner(I_PI, 0.0))
    expected = (1 - c**4) ** 0.25
    assert kernel_norm(KernelSpec(0.0, I_PI, 4.0)) == pytest.approx(expected, rel=1e-10)


def test_reproducing_kernel_diagonal():
    a = 0.3 + 0.4j
    spec = KernelSpec(a, I_PI)
    assert eval_kernel(spec, a).real == pytest.approx(kernel_diagonal(a, I_PI), rel=1e-13)


def test_kernel_inner_product_reproduces():
    a, b = 0.5, -0.3 + 0.2j
    inner = InnerFunction((0.2j,), 0.5)
    got = kernel_inner_product(a, b, inner)
    assert got == pytest.approx(eval_kernel(KernelSpec(a, inner), b), abs=1e-8)


def test_sup_norm_of_hardy_kernel():
    a = 0.8
    assert kernel_sup_norm(KernelSpec(a)) == pytest.approx(1 / (1 - a), rel=1e-8)


def test_aleksandrov_surrogate_degenerate():
    with pytest.raises(BoundaryDegenerateError):
        aleksandrov_surrogate(1 - 1e-13, InnerFunction.blaschke([0.0]), 2.0)


def test_norm_estimate_p2_ratio_is_one():
    est = norm_estimate(KernelSpec(0.75, I_PI, 2.0))
    assert est.ratio == pytest.approx(1.0, rel=1e-10)


def test_trace_weights_and_norm():
    pts = [0.5, 0.5j]
    w = trace_weights(pts, "hardy")
    assert [x.weight for x in w] == pytest.approx([0.75, 0.75])
    assert trace_norm([1.0, 1.0], w, 2) == pytest.approx(math.sqrt(1.5))
    wm = trace_weights(pts, "model", I_PI)
    assert all(x.weight >= y.weight for x, y in zip(wm, w))
    with pytest.raises(ValueError):
        trace_weights(pts, "model")
    with pytest.raises(ValueError):
        trace_norm([1.0], w, 2)


def test_pw_complex_weights():
    w = trace_weights([1 + 0.5j], "pw-complex", p=2.0, tau=math.pi)
    assert w[0].weight == pytest.approx(math.exp(-math.pi) * 1.5)
