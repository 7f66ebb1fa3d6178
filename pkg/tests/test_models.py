import numpy as np
import pytest

from gazekf import (
    StateEstimate,
    make_constant_velocity_model,
    make_identity_measurement,
    make_pendulum_model,
    numerical_jacobian,
)


class TestConstantVelocity:
    def test_one_euler_step(self):
        m = make_constant_velocity_model(dt=1.0, q_scale=0.0)
        assert np.allclose(m.f(np.array([0.0, 1.0])), [1.0, 1.0])

    def test_jacobian_is_constant(self):
        m = make_constant_velocity_model(dt=1.0, q_scale=0.0)
        expected = np.array([[1.0, 1.0], [0.0, 1.0]])
        for x in ([0.0, 0.0], [3.0, -7.0], [100.0, 0.5]):
            assert np.array_equal(m.jacobian_f(np.array(x)), expected)

    def test_zero_velocity_fixed_point(self):
        m = make_constant_velocity_model(dt=0.5, q_scale=0.0)
        assert np.allclose(m.f(np.array([2.0, 0.0])), [2.0, 0.0])

    def test_q_is_scaled_identity(self):
        m = make_constant_velocity_model(dt=1.0, q_scale=0.25)
        assert np.allclose(m.q, 0.25 * np.eye(2))

    @pytest.mark.parametrize("dt", [0.0, -1.0])
    def test_rejects_nonpositive_dt(self, dt):
        with pytest.raises(ValueError):
            make_constant_velocity_model(dt=dt, q_scale=0.1)

    def test_rejects_negative_q_scale(self):
        with pytest.raises(ValueError):
            make_constant_velocity_model(dt=1.0, q_scale=-0.1)


class TestPendulum:
    def test_f_at_origin_angle(self):
        m = make_pendulum_model(dt=0.1, q_scale=0.0)
        assert np.allclose(m.f(np.array([0.0, 1.0])), [0.1, 1.0])

    def test_jacobian_at_zero_angle(self):
        m = make_pendulum_model(dt=0.1, q_scale=0.0)
        expected = np.array([[1.0, 0.1], [-0.1, 1.0]])
        assert np.allclose(m.jacobian_f(np.array([0.0, 5.0])), expected)

    def test_jacobian_at_quarter_turn_matches_central_difference(self):
        m = make_pendulum_model(dt=0.1, q_scale=0.0)
        x = np.array([np.pi / 2, 0.0])
        analytic = m.jacobian_f(x)
        assert np.allclose(analytic, [[1.0, 0.1], [0.0, 1.0]], atol=1e-12)
        numeric = numerical_jacobian(m.f, x, eps=1e-6)
        assert np.allclose(numeric, analytic, atol=1e-9)

    def test_rejects_nonpositive_dt(self):
        with pytest.raises(ValueError):
            make_pendulum_model(dt=0.0, q_scale=0.1)


class TestIdentityMeasurement:
    def test_h_is_identity(self):
        m = make_identity_measurement(2, 1.0)
        assert np.allclose(m.h(np.array([3.0, 4.0])), [3.0, 4.0])

    def test_jacobian_is_identity(self):
        m = make_identity_measurement(2, 1.0)
        for x in ([0.0, 0.0], [-1.0, 9.0]):
            assert np.array_equal(m.jacobian_h(np.array(x)), np.eye(2))

    def test_r_is_scaled_identity(self):
        m = make_identity_measurement(2, 0.01)
        assert np.allclose(m.r, [[0.01, 0.0], [0.0, 0.01]])

    @pytest.mark.parametrize("r_scale", [0.0, -1.0])
    def test_rejects_nonpositive_r_scale(self, r_scale):
        with pytest.raises(ValueError):
            make_identity_measurement(2, r_scale)

    def test_rejects_m_below_one(self):
        with pytest.raises(ValueError):
            make_identity_measurement(0, 1.0)


class TestStateEstimate:
    def test_symmetrizes_covariance(self):
        cov = np.array([[1.0, 0.5 + 4e-10], [0.5, 1.0]])
        est = StateEstimate([0.0, 0.0], cov)
        assert np.array_equal(est.cov, est.cov.T)

    def test_rejects_asymmetric_covariance(self):
        with pytest.raises(ValueError):
            StateEstimate([0.0, 0.0], [[1.0, 0.9], [0.0, 1.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            StateEstimate([0.0, np.nan], np.eye(2))
        with pytest.raises(ValueError):
            StateEstimate([0.0, 0.0], np.full((2, 2), np.inf))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            StateEstimate([0.0, 0.0, 0.0], np.eye(2))


def test_all_builtin_jacobians_match_central_differences():
    # 100 random states in [-10, 10]^2, relative tolerance 1e-5 at eps 1e-6.
    rng = np.random.default_rng(7)
    states = rng.uniform(-10.0, 10.0, size=(100, 2))
    models = [
        make_constant_velocity_model(1.0, 0.01),
        make_constant_velocity_model(0.1, 0.01),
        make_pendulum_model(0.1, 0.01),
        make_pendulum_model(0.5, 0.01),
    ]
    for model in models:
        for x in states:
            numeric = numerical_jacobian(model.f, x, eps=1e-6)
            assert np.allclose(numeric, model.jacobian_f(x), rtol=1e-5, atol=1e-8)
    meas = make_identity_measurement(2, 1.0)
    for x in states:
        numeric = numerical_jacobian(meas.h, x, eps=1e-6)
        assert np.allclose(numeric, meas.jacobian_h(x), rtol=1e-5, atol=1e-8)


def test_constructors_are_pure():
    a = make_pendulum_model(dt=0.1, q_scale=0.02)
    b = make_pendulum_model(dt=0.1, q_scale=0.02)
    x = np.array([1.3, -0.4])
    assert np.array_equal(a.f(x), b.f(x))
    assert np.array_equal(a.jacobian_f(x), b.jacobian_f(x))
    assert np.array_equal(a.q, b.q)
    assert a.dt == b.dt
