import mpmath
import numpy as np
import pytest

from crackmono.special import SERIES_CUTOFF, hankel1_0, j0, y0, y0_regular


def sample_points():
    return np.unique(np.concatenate([np.geomspace(1e-8, 1e3, 3000), [1.0, 2.0, 2.404825557695773]]))


def reference(fn, xs):
    mpmath.mp.dps = 40
    return np.array([float(fn(mpmath.mpf(float(x)))) for x in xs])


@pytest.mark.parametrize("name", ["j0", "y0"])
def test_bessel_against_multiprecision(name):
    xs = sample_points()
    ours = {"j0": j0, "y0": y0}[name](xs)
    mp_fn = {"j0": mpmath.besselj, "y0": mpmath.bessely}[name]
    ref = reference(lambda x: mp_fn(0, x), xs)
    # pure relative error is meaningless at the zeros; scale by the envelope
    envelope = np.maximum(np.abs(ref), np.sqrt(2 / (np.pi * xs)))
    assert np.max(np.abs(ours - ref) / envelope) < 1e-12


def test_regular_part_of_y0():
    xs = np.concatenate([np.geomspace(1e-8, 20, 400), [SERIES_CUTOFF * (1 - 1e-15), SERIES_CUTOFF]])
    mpmath.mp.dps = 40
    ref = np.array([float(mpmath.bessely(0, x) - 2 / mpmath.pi * mpmath.besselj(0, x) * mpmath.log(x / 2))
                    for x in map(mpmath.mpf, xs)])
    assert np.max(np.abs(y0_regular(xs) - ref)) < 1e-13


def test_regular_part_continuous_at_cutoff():
    below = y0_regular(np.nextafter(SERIES_CUTOFF, 0))
    at = y0_regular(SERIES_CUTOFF)
    assert abs(below - at) < 1e-14


def test_hankel():
    x = np.array([0.1, 1.0, 30.0])
    assert np.allclose(hankel1_0(x), j0(x) + 1j * y0(x), rtol=0, atol=0)
