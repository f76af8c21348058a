import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from levywave.errors import CoverageError, DomainError
from levywave.noise import LevyModel, PointConfiguration, SpaceTimeWindow, sample_prm
from levywave.solver import (
    PointValue,
    Solution,
    WindowIntegral,
    add_one_cost,
    evaluate_field,
    second_add_one_cost,
    solve,
    solve_fast,
    solve_naive,
)


def _config(s, y, z, t0=1.0, half=6.0):
    w = SpaceTimeWindow(t0=t0, x_min=-half, x_max=half)
    return PointConfiguration(s=s, y=y, z=z, window=w)


def _random_config(seed, rep=0, mass=5.0, t0=1.0, half=3.0):
    model = LevyModel.two_point(mass=mass)
    return sample_prm(model, SpaceTimeWindow(t0=t0, x_min=-half, x_max=half), (seed, rep))


def _direct_field_value(cfg, u, x):
    r = cfg.window.t0 - cfg.s
    hits = np.abs(x - cfg.y) < r
    return 1.0 + 0.5 * np.sum(cfg.z[hits] * u[hits])


# Hand cases


def test_empty_config_trivial_field():
    cfg = _config([], [], [])
    sol = solve_naive(cfg)
    assert sol.u.size == 0
    field = evaluate_field(sol)
    assert field(0.0) == 1.0 and field(2.0) == 1.0
    assert np.array_equal(solve_fast(cfg).u, sol.u)


def test_single_atom_hand_case():
    cfg = _config([0.3], [0.0], [2.0])
    sol = solve_naive(cfg)
    assert np.array_equal(sol.u, [1.0])
    assert np.array_equal(sol.weights, [1.0])  # 0.5 * z * u
    field = evaluate_field(sol)
    assert field(0.0) == 2.0  # 1 + 0.5*2*1 inside |x| < 0.7
    assert field(0.69) == 2.0
    assert field(0.71) == 1.0
    assert field(-3.0) == 1.0


def test_two_nested_atoms_hand_case():
    # atom 2 strictly inside atom 1's forward cone: u2 = 1 + z1/2
    cfg = _config([0.2, 0.8], [0.0, 0.1], [1.0, 3.0])
    sol = solve_naive(cfg)
    assert np.array_equal(sol.u, [1.0, 1.5])
    field = evaluate_field(sol)
    # at x=0.1: inside both cones (r1=0.8, r2=0.2)
    assert field(0.1) == 1.0 + 0.5 * 1.0 + 0.5 * 3.0 * 1.5
    # at x=0.5: inside cone 1 only
    assert field(0.5) == 1.5


def test_cone_boundary_is_strict():
    # |y2 - y1| == s2 - s1 exactly (dyadic floats): no influence
    cfg = _config([0.25, 0.75], [0.0, 0.5], [1.0, 1.0])
    assert np.array_equal(solve_naive(cfg).u, [1.0, 1.0])
    assert np.array_equal(solve_fast(cfg).u, [1.0, 1.0])


def test_equal_time_atoms_do_not_interact():
    cfg = _config([0.5, 0.5], [0.0, 0.05], [2.0, 2.0])
    assert np.array_equal(solve_naive(cfg).u, [1.0, 1.0])
    assert np.array_equal(solve_fast(cfg).u, [1.0, 1.0])


def test_solve_method_dispatch():
    cfg = _random_config(0)
    assert np.array_equal(solve(cfg, "naive").u, solve_naive(cfg).u)
    assert np.array_equal(solve(cfg, "fast").u, solve_fast(cfg).u)
    with pytest.raises(DomainError):
        solve(cfg, "magic")


# Fast vs naive equivalence


def test_fast_matches_naive_on_random_configs():
    for seed in range(30):
        cfg = _random_config(seed, mass=np.random.default_rng(seed).uniform(1, 30))
        a, b = solve_naive(cfg).u, solve_fast(cfg).u
        scale = np.maximum(np.abs(a), 1.0)
        assert np.max(np.abs(a - b) / scale, initial=0.0) <= 1e-10


@settings(max_examples=50)
@given(data=st.data(), n=st.integers(0, 40))
def test_fast_matches_naive_hypothesis(data, n):
    # dyadic lattice coordinates: y+s and y-s are exact, so the rotated-frame
    # cone predicate of solve_fast coincides bit-for-bit with the direct one
    # (continuous inputs can straddle the open boundary within one ulp, where
    # the two formulations legitimately differ)
    s = np.sort(data.draw(arrays(np.int64, n, elements=st.integers(0, 64)))) / 64.0
    y = data.draw(arrays(np.int64, n, elements=st.integers(-192, 192))) / 64.0
    sign = data.draw(arrays(np.int64, n, elements=st.sampled_from([-1, 1])))
    mag = data.draw(arrays(np.int64, n, elements=st.integers(16, 256)))
    cfg = _config(s, y, sign * mag / 64.0, half=3.0)
    a, b = solve_naive(cfg).u, solve_fast(cfg).u
    scale = np.maximum(np.abs(a), 1.0)
    assert np.max(np.abs(a - b) / scale, initial=0.0) <= 1e-10


def test_large_config_performance_smoke():
    model = LevyModel.two_point(mass=5.0)
    w = SpaceTimeWindow(t0=1.0, x_min=-20_000.0, x_max=20_000.0)
    cfg = sample_prm(model, w, (1, 0))
    assert cfg.n > 150_000
    sol = solve_fast(cfg)  # would be ~n^2/2 = 2e10 kernel ops for naive
    assert np.isfinite(sol.u).all()


def test_solver_is_deterministic():
    cfg = _random_config(3)
    assert np.array_equal(solve_fast(cfg).u, solve_fast(cfg).u)


# Field evaluation


def test_field_matches_direct_summation():
    for seed in range(5):
        cfg = _random_config(seed, half=4.0)
        sol = solve_fast(cfg)
        field = evaluate_field(sol)
        for x in np.linspace(-3.0, 3.0, 101):
            direct = _direct_field_value(cfg, sol.u, x)
            assert field(x) == pytest.approx(direct, rel=1e-12, abs=1e-12)


def test_field_coverage_error():
    cfg = _random_config(0, half=3.0)
    field = evaluate_field(solve_fast(cfg))
    field(2.0)
    with pytest.raises(CoverageError):
        field(2.5)
    tight = SpaceTimeWindow(t0=1.0, x_min=-0.5, x_max=0.5)
    with pytest.raises(CoverageError):
        evaluate_field(solve_naive(PointConfiguration([0.1], [0.0], [1.0], tight)))


def test_field_valid_at_single_point():
    # width exactly 2*t0: the field is exact at the lone midpoint and nowhere else
    w = SpaceTimeWindow.for_interval(1.0, 0.0, 0.0)
    field = evaluate_field(solve_naive(PointConfiguration([0.5], [0.0], [2.0], w)))
    assert field(0.0) == pytest.approx(2.0)
    with pytest.raises(CoverageError):
        field(0.25)


def test_field_pieces_cover_valid_range():
    cfg = _random_config(2, half=4.0)
    field = evaluate_field(solve_fast(cfg))
    left, right, value = field.pieces()
    assert left[0] == field.x_lo and right[-1] == field.x_hi
    assert np.all(left[1:] == right[:-1])
    mid = 0.5 * (left + right)
    assert np.allclose([field(m) for m in mid], value, rtol=0, atol=0)


def test_mean_one_and_stationarity(two_point):
    # E[u(t0, x)] = 1 and laws at x=0, x=5 agree (disjoint cones -> independent)
    reps = 3000
    w = SpaceTimeWindow.for_interval(1.0, -1.0, 6.0)
    a = np.empty(reps)
    b = np.empty(reps)
    for r in range(reps):
        field = evaluate_field(solve_fast(sample_prm(two_point, w, (77, r))))
        a[r] = field(0.0)
        b[r] = field(5.0)
    se_a = a.std(ddof=1) / np.sqrt(reps)
    assert abs(a.mean() - 1.0) < 4 * se_a
    se_diff = np.sqrt(a.var(ddof=1) / reps + b.var(ddof=1) / reps)
    assert abs(a.mean() - b.mean()) < 4 * se_diff
    # variances agree within 4 joint SE (SE of a variance via fourth moments)
    def var_se(x):
        m = x.mean()
        return np.sqrt((np.mean((x - m) ** 4) - x.var(ddof=0) ** 2) / reps)

    assert abs(a.var(ddof=1) - b.var(ddof=1)) < 4 * np.hypot(var_se(a), var_se(b))


# Add-one cost


def _insert_atom(cfg, xi):
    r, ys, zs = xi
    k = int(np.searchsorted(cfg.s, r))
    w = cfg.window
    if not (w.x_min <= ys <= w.x_max):
        w = SpaceTimeWindow(w.t0, min(w.x_min, ys), max(w.x_max, ys))
    return PointConfiguration(
        s=np.insert(cfg.s, k, r), y=np.insert(cfg.y, k, ys), z=np.insert(cfg.z, k, zs), window=w
    )


def test_add_one_cost_empty_config_hand_case():
    cfg = _config([], [], [])
    f = PointValue(0.0)
    assert add_one_cost(cfg, (0.2, 0.1, 3.0), f) == 0.5 * 3.0  # |x-y|=0.1 < 0.8
    assert add_one_cost(cfg, (0.2, 0.9, 3.0), f) == 0.0  # outside the cone


def test_add_one_cost_matches_resolve():
    f_point = PointValue(0.3)
    f_win = WindowIntegral(2.0)
    gen = np.random.default_rng(5)
    for seed in range(10):
        cfg = _random_config(seed, half=4.0)
        xi = (gen.uniform(0, 1), gen.uniform(-2, 2), gen.uniform(0.5, 2) * gen.choice([-1, 1]))
        for f in (f_point, f_win):
            base = _functional_value(cfg, f)
            aug = _functional_value(_insert_atom(cfg, xi), f)
            d = add_one_cost(cfg, xi, f)
            assert d == pytest.approx(aug - base, rel=1e-9, abs=1e-11)


def _functional_value(cfg, f):
    sol = solve_fast(cfg)
    w = f.atom_weights(cfg.s, cfg.y, cfg.window.t0)
    return float(np.dot(0.5 * cfg.z * sol.u, w))


def test_add_one_cost_support_is_bitwise_zero():
    f = PointValue(0.0)
    for seed in range(50):
        cfg = _random_config(seed)
        # atom outside the backward cone of (t0, 0): |x - y| >= t0 - r
        xi = (0.5, 0.51 + 2.0 * seed / 50, 1.7)
        assert add_one_cost(cfg, xi, f) == 0.0


def test_add_one_cost_after_horizon_returns_zero():
    cfg = _random_config(1)
    assert add_one_cost(cfg, (1.0, 0.0, 2.0), PointValue(0.0)) == 0.0
    assert add_one_cost(cfg, (1.5, 0.0, 2.0), WindowIntegral(1.0)) == 0.0


def test_add_one_cost_invalid_xi():
    cfg = _random_config(1)
    with pytest.raises(DomainError):
        add_one_cost(cfg, (-0.1, 0.0, 1.0), PointValue(0.0))
    with pytest.raises(DomainError):
        add_one_cost(cfg, (0.5, 0.0, 0.0), PointValue(0.0))


def test_add_one_cost_reuses_solution():
    cfg = _random_config(4)
    sol = solve_fast(cfg)
    xi = (0.4, 0.2, 1.3)
    assert add_one_cost(cfg, xi, PointValue(0.0), solution=sol) == add_one_cost(
        cfg, xi, PointValue(0.0)
    )


# Second add-one cost


def test_second_difference_matches_brute_force():
    f = PointValue(0.0)
    gen = np.random.default_rng(9)
    for seed in range(8):
        cfg = _random_config(seed, half=4.0)
        r1, r2 = np.sort(gen.uniform(0, 1, 2))
        if r1 == r2:
            continue
        xi1 = (r1, gen.uniform(-1, 1), 1.5)
        xi2 = (r2, gen.uniform(-1, 1), -1.2)
        d2 = second_add_one_cost(cfg, xi1, xi2, f)
        f00 = _functional_value(cfg, f)
        f10 = _functional_value(_insert_atom(cfg, xi1), f)
        f01 = _functional_value(_insert_atom(cfg, xi2), f)
        f11 = _functional_value(_insert_atom(_insert_atom(cfg, xi1), xi2), f)
        assert d2 == pytest.approx(f11 - f10 - f01 + f00, rel=1e-9, abs=1e-11)


def test_second_difference_symmetry_via_brute_force():
    # D1 D2 F = D2 D1 F: the brute-force double difference is order-free
    f = WindowIntegral(1.5)
    cfg = _random_config(2, half=4.0)
    xi1, xi2 = (0.2, 0.3, 1.0), (0.6, 0.1, 2.0)
    d2 = second_add_one_cost(cfg, xi1, xi2, f)
    f00 = _functional_value(cfg, f)
    f10 = _functional_value(_insert_atom(cfg, xi1), f)
    f01 = _functional_value(_insert_atom(cfg, xi2), f)
    f11 = _functional_value(_insert_atom(_insert_atom(cfg, xi2), xi1), f)
    assert d2 == pytest.approx(f11 - f10 - f01 + f00, rel=1e-9, abs=1e-11)


def test_second_difference_nested_cones_hand_case():
    # both differences on the empty configuration: D = z1 z2 / 4 on the nested set
    cfg = _config([], [], [])
    f = PointValue(0.0)
    xi1, xi2 = (0.1, 0.0, 2.0), (0.5, 0.2, 3.0)
    # xi2 in cone of x=0 (|0.2| < 0.5) and xi1 in backward cone of xi2 (|0.2| < 0.4)
    assert second_add_one_cost(cfg, xi1, xi2, f) == 0.25 * 2.0 * 3.0


def test_second_difference_support_bitwise_zero():
    f = PointValue(0.0)
    cfg = _random_config(6)
    # xi1 outside the backward cone of xi2
    assert second_add_one_cost(cfg, (0.1, 2.0, 1.0), (0.6, 0.0, 1.0), f) == 0.0
    # xi2 outside the backward cone of (t0, x)
    assert second_add_one_cost(cfg, (0.1, 0.0, 1.0), (0.6, 3.0, 1.0), f) == 0.0
    # xi2 after the horizon
    assert second_add_one_cost(cfg, (0.1, 0.0, 1.0), (1.2, 0.0, 1.0), f) == 0.0


def test_second_difference_requires_time_order():
    cfg = _random_config(6)
    with pytest.raises(DomainError):
        second_add_one_cost(cfg, (0.6, 0.0, 1.0), (0.1, 0.0, 1.0), PointValue(0.0))


# Functionals


def test_window_integral_weights_are_overlap_lengths():
    f = WindowIntegral(2.0)
    s = np.array([0.0, 0.5, 0.9])
    y = np.array([0.0, 1.8, -5.0])
    w = f.atom_weights(s, y, 1.0)
    # overlap of (y-r, y+r) with [-2, 2]
    assert w[0] == 2.0  # r=1, interval (-1,1) inside
    assert w[1] == pytest.approx(0.7)  # r=0.5, (1.3, 2.3) -> cut at 2
    assert w[2] == 0.0


def test_point_value_weights_strict_indicator():
    f = PointValue(0.0)
    s = np.array([0.0, 0.0])
    y = np.array([0.999, 1.0])
    w = f.atom_weights(s, y, 1.0)
    assert w[0] == 1.0 and w[1] == 0.0


def test_solution_weights_definition():
    cfg = _random_config(8)
    sol = solve_fast(cfg)
    assert np.array_equal(sol.weights, 0.5 * cfg.z * sol.u)
    assert isinstance(sol, Solution)
