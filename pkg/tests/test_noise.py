import math

import numpy as np
import pytest
from scipy import stats

from noisyhk.noise import NoiseFamily, NoiseModel, NoiseStream, sample_noise


def rng(seed=0):
    return np.random.default_rng(seed)


def test_zero_family_returns_zero():
    assert sample_noise(NoiseModel.zero(), rng()) == 0.0
    assert np.all(sample_noise(NoiseModel.zero(), rng(), 5) == 0)


def test_uniform_bounded_and_centred():
    delta = 0.02
    x = sample_noise(NoiseModel.uniform(delta), rng(1), 10**6)
    assert np.all(np.abs(x) <= delta)
    assert abs(x.mean()) <= 3 * (delta / math.sqrt(3)) / 10**3


def test_rademacher_two_atoms_equal_frequency():
    delta = 0.05
    x = sample_noise(NoiseModel(NoiseFamily.RADEMACHER, delta), rng(2), 10**5)
    assert set(np.unique(x)) == {-delta, delta}
    assert abs(np.mean(x > 0) - 0.5) <= 0.01


def test_rademacher_custom_atom():
    x = sample_noise(NoiseModel("rademacher", 0.1, atom=0.04), rng(3), 1000)
    assert set(np.unique(x)) == {-0.04, 0.04}


def test_truncated_gaussian_bounded_by_rejection():
    m = NoiseModel(NoiseFamily.TRUNCATED_GAUSSIAN, 0.01, sigma=0.02)
    x = sample_noise(m, rng(4), 200_000)
    assert np.all(np.abs(x) <= 0.01)
    se = math.sqrt(m.variance() / len(x))
    assert abs(x.mean()) <= 3 * se


@pytest.mark.parametrize("sigma", [0.002, 0.005, 0.02])
def test_truncated_gaussian_constants_match_scipy(sigma):
    d = 0.01
    m = NoiseModel("tgauss", d, sigma=sigma)
    ref = stats.truncnorm(-d / sigma, d / sigma, scale=sigma)
    assert m.variance() == pytest.approx(ref.var(), rel=1e-9)
    a, p = m.mass_condition()
    assert a == d / 2
    assert p == pytest.approx(ref.sf(d / 2), rel=1e-9)


@pytest.mark.parametrize("model", [
    NoiseModel.uniform(0.03),
    NoiseModel("rademacher", 0.03),
    NoiseModel("rademacher", 0.03, atom=0.01),
    NoiseModel("tgauss", 0.03),
])
def test_mass_condition_holds_empirically(model):
    a, p = model.mass_condition()
    x = sample_noise(model, rng(5), 100_000)
    tol = 3 * math.sqrt(p * (1 - p) / len(x))
    assert np.mean(x >= a) >= p - tol
    assert np.mean(x <= -a) >= p - tol
    assert model.variance() > 0


def test_documented_constants():
    assert NoiseModel.uniform(0.04).mass_condition() == (0.02, 0.25)
    assert NoiseModel("rademacher", 0.04, atom=0.03).mass_condition() == (0.03, 0.5)
    with pytest.raises(ValueError):
        NoiseModel.zero().mass_condition()


@pytest.mark.parametrize("kwargs", [
    dict(family="uniform", delta=0.0),
    dict(family="uniform", delta=-0.1),
    dict(family="zero", delta=0.1),
    dict(family="rademacher", delta=0.1, atom=0.2),
    dict(family="tgauss", delta=0.1, sigma=0.0),
])
def test_invalid_models_rejected(kwargs):
    with pytest.raises(ValueError):
        NoiseModel(**kwargs)


def test_stream_rows_follow_block_order():
    model = NoiseModel.uniform(0.1)
    s = NoiseStream(model, rng(9), 3)
    rows = np.array([s.next() for _ in range(NoiseStream.BLOCK + 2)])
    direct = rng(9)
    first = sample_noise(model, direct, (NoiseStream.BLOCK, 3))
    second = sample_noise(model, direct, (NoiseStream.BLOCK, 3))
    assert np.array_equal(rows[:NoiseStream.BLOCK], first)
    assert np.array_equal(rows[NoiseStream.BLOCK:], second[:2])


def test_round_trip_dict():
    for m in (NoiseModel.uniform(0.1), NoiseModel("tgauss", 0.1, sigma=0.3), NoiseModel.zero()):
        assert NoiseModel.from_dict(m.to_dict()).to_dict() == m.to_dict()
