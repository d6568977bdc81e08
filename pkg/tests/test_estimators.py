import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mslab.estimators import GramSpectrum, ModelSpaceInterpolator
from mslab.geometry import PointSequence
from mslab.inner import InnerFunction
from mslab.paley_wiener import PWSequenceSpec

I_PI = InnerFunction.singular(math.pi)


def test_gram_spectrum_disk_accepts_pairs_and_complex():
    pts = PointSequence.dyadic_tree(8).points
    a = GramSpectrum().fit(pts)
    b = GramSpectrum().fit(np.c_[pts.real, pts.imag])
    assert a.lambda_min_ == pytest.approx(b.lambda_min_)
    assert a.transform().shape == (1, 4)


def test_gram_spectrum_paley_wiener(golden):
    row = next(r for r in golden("pw_gram.csv") if r["family"] == "quarter-shift" and r["N"] == 64 and r["tau_mult"] == 1)
    pts = PWSequenceSpec("quarter-shift", K=64).centered(64)
    est = GramSpectrum(space="paley-wiener").fit(pts.reshape(-1, 1))
    assert est.lambda_min_ == pytest.approx(row["lambda_min"], rel=1e-9)


def test_gram_spectrum_validation():
    with pytest.raises(ValueError):
        GramSpectrum().fit([1.5])
    with pytest.raises(ValueError):
        GramSpectrum(space="torus").fit([0.1])
    with pytest.raises(NotFittedError):
        GramSpectrum().transform()


def test_interpolator_fit_predict_and_clone():
    pts = PointSequence.exponential(6).points
    y = np.linspace(1, 2, 6) + 0.5j
    model = ModelSpaceInterpolator(inner=I_PI, outer=I_PI.with_power(0.5)).fit(pts, y)
    targets = model.interpolant_.targets
    assert np.allclose(model.predict(pts), y * targets, rtol=1e-8)
    twin = clone(model)
    assert twin.get_params()["s"] == 1.2 and not hasattr(twin, "interpolant_")
    with pytest.raises(ValueError):
        model.fit(pts, y[:3])
