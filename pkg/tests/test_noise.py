import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from levywave.errors import CoverageError, DomainError, ModelRejectedError
from levywave.noise import LevyModel, PointConfiguration, SpaceTimeWindow, sample_prm
from levywave.streams import P_IID, stream


# Jump-size measures


def test_moment_two_point():
    m = LevyModel.two_point(mass=5.0, jump=1.0)
    for p in (0.0, 1.0, 2.0, 3.7):
        assert m.moment(p) == 5.0
    assert LevyModel.two_point(mass=3.0, jump=2.0).moment(2.0) == 12.0


def test_moment_uniform():
    m = LevyModel.uniform(mass=1.0, jump=1.0)
    assert m.moment(2.0) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert m.moment(0.0) == 1.0


def test_moment_atoms():
    m = LevyModel.from_atoms([(2.0, 0.25), (-2.0, 0.25)])
    assert m.mass == 0.5
    assert m.moment(2.0) == 2.0
    assert m.moment(1.0) == 1.0


def test_moment_negative_order_rejected():
    with pytest.raises(DomainError):
        LevyModel.two_point().moment(-0.5)


def test_symmetric_models_have_exact_zero_drift():
    assert LevyModel.two_point().drift() == 0.0
    assert LevyModel.uniform().drift() == 0.0
    LevyModel.two_point().require_centered()
    LevyModel.from_atoms([(1.0, 0.5), (-2.0, 0.25)]).require_centered()


def test_noncentered_model_rejected():
    bad = LevyModel.from_atoms([(1.0, 1.0)])
    with pytest.raises(ModelRejectedError):
        bad.require_centered()
    window = SpaceTimeWindow(t0=1.0, x_min=-1.0, x_max=1.0)
    with pytest.raises(ModelRejectedError):
        sample_prm(bad, window, (0, 0))


@pytest.mark.parametrize(
    "bad",
    [
        dict(kind="two_point", mass=0.0),
        dict(kind="two_point", mass=-1.0),
        dict(kind="two_point", mass=1.0, jump=0.0),
        dict(kind="two_point", mass=1.0, alpha=0.0),
        dict(kind="two_point", mass=1.0, alpha=1.5),
        dict(kind="gauss", mass=1.0),
        dict(kind="atoms", mass=1.0, atoms=()),
        dict(kind="atoms", mass=1.0, atoms=((0.0, 1.0),)),
        dict(kind="atoms", mass=2.0, atoms=((1.0, 0.5), (-1.0, 0.5))),
    ],
)
def test_invalid_models_rejected(bad):
    with pytest.raises(ModelRejectedError):
        LevyModel(**bad)


def test_sample_sizes_two_point_support():
    m = LevyModel.two_point(mass=5.0, jump=2.0)
    z = m.sample_sizes(stream(3, P_IID, 0), 1000)
    assert set(np.unique(np.abs(z))) == {2.0}


def test_sample_sizes_uniform_support():
    m = LevyModel.uniform(mass=1.0, jump=1.5)
    z = m.sample_sizes(stream(3, P_IID, 1), 10_000)
    assert np.all(np.abs(z) <= 1.5)
    assert np.all(z != 0.0)


def test_jump_moment_monte_carlo():
    # uniform on [-1,1]: E z^2 = 1/3, Var(z^2) = 1/5 - 1/9 = 4/45
    m = LevyModel.uniform(mass=1.0, jump=1.0)
    z = m.sample_sizes(stream(11, P_IID, 0), 100_000)
    se = np.sqrt((1.0 / 5.0 - 1.0 / 9.0) / z.size)
    assert abs(np.mean(z**2) - 1.0 / 3.0) < 4 * se


def test_atom_frequencies_monte_carlo():
    m = LevyModel.from_atoms([(2.0, 0.25), (-1.0, 0.75)])
    z = m.sample_sizes(stream(12, P_IID, 0), 100_000)
    p_hat = np.mean(z == 2.0)
    se = np.sqrt(0.25 * 0.75 / z.size)
    assert abs(p_hat - 0.25) < 4 * se


# Windows


def test_window_covers_light_cone():
    w = SpaceTimeWindow(t0=1.0, x_min=-3.0, x_max=3.0)
    assert w.covers(-2.0, 2.0)
    assert not w.covers(-2.5, 2.5)
    w.require_covers(-2.0, 2.0)
    with pytest.raises(CoverageError):
        w.require_covers(-2.5, 2.5)


def test_window_area_and_validation():
    assert SpaceTimeWindow(2.0, -1.0, 3.0).area == 8.0
    with pytest.raises(DomainError):
        SpaceTimeWindow(0.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        SpaceTimeWindow(1.0, 2.0, -2.0)


@given(
    t0=st.floats(0.1, 5.0),
    a=st.floats(-50.0, 50.0),
    width=st.floats(0.0, 20.0),
    pad=st.floats(0.0, 3.0),
)
def test_for_interval_always_covers(t0, a, width, pad):
    w = SpaceTimeWindow.for_interval(t0, a, a + width, pad=pad)
    assert w.covers(a, a + width)


# Point configurations


def test_configuration_validation():
    w = SpaceTimeWindow(t0=1.0, x_min=-2.0, x_max=2.0)
    PointConfiguration(s=[0.1, 0.5], y=[0.0, 1.0], z=[1.0, -1.0], window=w)
    with pytest.raises(DomainError):
        PointConfiguration(s=[0.5, 0.1], y=[0.0, 1.0], z=[1.0, 1.0], window=w)
    with pytest.raises(DomainError):
        PointConfiguration(s=[0.1], y=[5.0], z=[1.0], window=w)
    with pytest.raises(DomainError):
        PointConfiguration(s=[0.1], y=[0.0], z=[0.0], window=w)
    with pytest.raises(DomainError):
        PointConfiguration(s=[1.5], y=[0.0], z=[1.0], window=w)


def test_sample_prm_is_deterministic(two_point):
    w = SpaceTimeWindow(t0=1.0, x_min=-2.0, x_max=2.0)
    a = sample_prm(two_point, w, (42, 7))
    b = sample_prm(two_point, w, (42, 7))
    assert np.array_equal(a.s, b.s) and np.array_equal(a.y, b.y) and np.array_equal(a.z, b.z)
    c = sample_prm(two_point, w, (42, 8))
    assert not (a.n == c.n and np.array_equal(a.s, c.s))


def test_sample_prm_invariants(two_point):
    w = SpaceTimeWindow(t0=1.0, x_min=-2.0, x_max=2.0)
    cfg = sample_prm(two_point, w, (0, 0))
    assert np.all(np.diff(cfg.s) >= 0)
    assert cfg.s.min() >= 0 and cfg.s.max() <= 1.0
    assert cfg.y.min() >= -2.0 and cfg.y.max() <= 2.0
    assert np.all(cfg.z != 0)
    assert cfg.stream_key == (0, 0)


def test_poisson_count_mean(two_point):
    # lambda * area = 5 * (1 * 4) = 20; z-test over 10^4 replications
    w = SpaceTimeWindow(t0=1.0, x_min=-2.0, x_max=2.0)
    reps = 10_000
    counts = np.array([sample_prm(two_point, w, (5, r)).n for r in range(reps)])
    se = np.sqrt(20.0 / reps)
    assert abs(counts.mean() - 20.0) < 4 * se
    # positions are uniform: mean position near 0
    ys = np.concatenate([sample_prm(two_point, w, (5, r)).y for r in range(200)])
    se_y = (4.0 / np.sqrt(12.0)) / np.sqrt(ys.size)
    assert abs(ys.mean()) < 4 * se_y


def test_replication_counts_uncorrelated(two_point):
    w = SpaceTimeWindow(t0=1.0, x_min=-2.0, x_max=2.0)
    counts = np.array([sample_prm(two_point, w, (9, r)).n for r in range(10_001)])
    corr = np.corrcoef(counts[:-1], counts[1:])[0, 1]
    assert abs(corr) < 0.05
