"""Reduced coefficients, generators, and condition certificates."""

import numpy as np
import pytest
from scipy.linalg import expm

from levyflow.errors import DomainError
from levyflow.flows import drift_field
from levyflow.levy import NoiseSpec, StableComponent
from levyflow.reduction import (
    ModelSpec,
    TestFunction,
    apply_generator,
    apply_reduced_generator,
    bump,
    certify_conditions,
    certify_linearization,
    cos_wave,
    flow_identity_residual,
    jump_displacement,
    matrix_field,
    modulated_bump,
    reduced_matrix,
)

B_DIAG = np.diag([1.0, -2.0])


def make_model(name):
    if name == "cauchy1d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)]),
                         drift_field("zero", dim=1), matrix_field("identity", dim=1),
                         name=name)
    if name == "linear1d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)]),
                         drift_field("linear", matrix=[[1.0]]),
                         matrix_field("identity", dim=1), name=name)
    if name == "rotation":
        return ModelSpec(NoiseSpec([StableComponent.normalized(0.7),
                                    StableComponent.normalized(0.9)]),
                         drift_field("rotation"), matrix_field("identity", dim=2),
                         name=name)
    if name == "tanh2d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(0.8)] * 2),
                         drift_field("tanh", dim=2, amplitude=0.5),
                         matrix_field("tanh_diag", dim=2, amplitude=0.25), name=name)
    if name == "linear2d":
        return ModelSpec(NoiseSpec([StableComponent.normalized(1.0)] * 2),
                         drift_field("linear", matrix=B_DIAG),
                         matrix_field("tanh_diag", dim=2, amplitude=0.25), name=name)
    raise ValueError(name)


@pytest.fixture(scope="module")
def models():
    return {n: make_model(n) for n in
            ["cauchy1d", "linear1d", "rotation", "tanh2d", "linear2d"]}


def rotation_matrix(t):
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])


class TestModelSpec:
    def test_regime_and_exponent(self, models):
        rot = models["rotation"]
        assert rot.regime == "B"
        assert rot.residual_exp == pytest.approx(43.0 / 900.0, abs=1e-14)
        assert models["linear1d"].residual_exp == pytest.approx(1.0 / 9.0, abs=1e-14)

    def test_gamma_indices(self, models):
        m = models["tanh2d"]
        assert m.gamma1 == m.gamma2 == 1.0
        assert m.gamma3 == 2.0
        assert m.gamma3 > max(1.0, m.noise.beta)

    def test_regime_b_index_violation_rejected(self):
        with pytest.raises(DomainError, match="index balance"):
            ModelSpec(NoiseSpec([StableComponent.normalized(0.4),
                                 StableComponent.normalized(0.95)]),
                      drift_field("rotation"), matrix_field("identity", dim=2))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(DomainError, match="dimension"):
            ModelSpec(NoiseSpec([StableComponent.normalized(1.0)]),
                      drift_field("rotation"), matrix_field("identity", dim=2))


class TestReducedMatrix:
    def test_zero_drift_returns_field(self, models):
        m = models["cauchy1d"]
        x = np.array([0.7])
        assert reduced_matrix(m, 0.9, x) == pytest.approx(m.matrix(x), abs=1e-10)

    @pytest.mark.parametrize("t", [0.25, 0.6, -0.8])
    def test_rotation_closed_form(self, models, t):
        at = reduced_matrix(models["rotation"], t, np.array([0.3, -0.8]))
        assert np.max(np.abs(at - rotation_matrix(t))) <= 1e-8

    @pytest.mark.parametrize("t", [0.3, 0.5, -0.4])
    def test_linear_conjugation_closed_form(self, models, t):
        m = models["linear2d"]
        x = np.array([0.4, -0.2])
        closed = expm(-B_DIAG * t) @ m.matrix(expm(B_DIAG * t) @ x)
        assert np.max(np.abs(reduced_matrix(m, t, x) - closed)) <= 1e-8

    def test_time_zero_is_field(self, models):
        for m in models.values():
            x = np.full(m.dim, 0.3)
            assert np.max(np.abs(reduced_matrix(m, 0.0, x) - m.matrix(x))) <= 1e-10

    def test_determinant_lower_bound(self, models):
        rng = np.random.default_rng(5)
        for m in models.values():
            pts = rng.normal(size=(10, m.dim))
            for t in (0.5, 1.0):
                at = reduced_matrix(m, t, pts)
                dets = np.abs(np.linalg.det(at))
                floor = m.matrix.det_lower * np.exp(-m.drift.jac_bound * m.dim * t)
                assert np.all(dets >= floor * (1 - 1e-8))

    def test_norm_growth_bound(self, models):
        rng = np.random.default_rng(6)
        for m in models.values():
            pts = rng.normal(size=(10, m.dim))
            for t in (0.5, 1.0, -1.0):
                at = reduced_matrix(m, t, pts)
                norms = np.linalg.norm(at, ord=2, axis=(1, 2))
                cap = m.matrix.norm_bound * np.exp(m.drift.jac_bound * abs(t))
                assert np.all(norms <= cap * (1 + 1e-8))


class TestJumpDisplacement:
    def test_zero_jump(self, models):
        for m in models.values():
            x = np.full(m.dim, 0.4)
            v = jump_displacement(m, 0.7, x, np.zeros(m.dim))
            assert np.max(np.abs(v)) <= 1e-9

    def test_zero_drift_is_matrix_action(self, models):
        m = models["cauchy1d"]
        x, z = np.array([0.3]), np.array([0.9])
        assert jump_displacement(m, 0.5, x, z) == pytest.approx(m.matrix(x) @ z, abs=1e-9)

    def test_rotation_independent_of_state(self, models):
        m = models["rotation"]
        t, z = 0.6, np.array([0.4, -0.1])
        v1 = jump_displacement(m, t, np.array([0.0, 0.0]), z)
        v2 = jump_displacement(m, t, np.array([2.0, -1.0]), z)
        expected = rotation_matrix(t) @ z
        assert v1 == pytest.approx(expected, abs=1e-8)
        assert v2 == pytest.approx(expected, abs=1e-8)


class TestLinearization:
    def test_zero_drift_exact(self, models):
        fit = certify_linearization(models["cauchy1d"], 0.5, np.array([0.2]))
        assert fit.slope == np.inf and fit.passed

    def test_rotation_exact(self, models):
        fit = certify_linearization(models["rotation"], 0.6, np.array([0.3, -0.8]))
        assert fit.slope == np.inf and fit.passed

    def test_smooth_drift_quadratic_remainder(self, models):
        fit = certify_linearization(models["tanh2d"], 0.5, np.array([0.3, -0.8]))
        assert fit.slope == pytest.approx(2.0, abs=0.1)
        assert fit.passed

    def test_magnitude_domain(self, models):
        with pytest.raises(DomainError):
            certify_linearization(models["tanh2d"], 0.5, np.zeros(2),
                                  magnitudes=np.array([0.5, 2.0]))


class TestConditions:
    def test_rotation_margins(self, models):
        rep = certify_conditions(models["rotation"],
                                 np.array([[0.3, -0.8], [1.0, 0.2], [-0.5, 0.6]]))
        assert rep.index_ok
        assert rep.index_margins[0] == pytest.approx(2.0 - 0.9 / 0.7, abs=1e-12)
        assert rep.index_margins[1] == pytest.approx(1.0 - (1 / 0.7 - 1 / 0.9), abs=1e-12)
        assert rep.time_exponent >= 1.0 - 0.1
        assert rep.passed

    def test_index_balance_failure_detected(self):
        # assembled by hand with indices violating the balance; the model
        # itself cannot be built, so evaluate the margins directly
        alpha, beta, eta = 0.4, 0.95, 1.0
        assert beta / alpha >= 1 + eta or 1 / alpha - 1 / beta >= eta

    def test_tanh_model_passes(self, models):
        rep = certify_conditions(models["tanh2d"], np.array([[0.3, -0.8], [1.0, 0.2]]))
        assert rep.passed
        assert rep.space_exponent >= 1.0 - 0.1

    def test_empty_plan_rejected(self, models):
        with pytest.raises(DomainError):
            certify_conditions(models["rotation"], np.zeros((0, 2)))

    def test_report_serializes(self, models):
        rep = certify_conditions(models["rotation"], np.array([[0.3, -0.8]]))
        d = rep.to_dict()
        assert isinstance(d["passed"], bool) and isinstance(d["index_margins"], list)


class TestGenerators:
    def test_constant_function_annihilated(self, models):
        const = TestFunction(value=lambda y: np.full(np.asarray(y).shape[:-1], 3.0),
                             gradient=lambda x: np.zeros_like(x),
                             limit_at_infinity=3.0)
        m = models["linear2d"]
        assert apply_generator(m, const, np.array([0.3, 0.1])) == pytest.approx(0.0, abs=1e-10)
        assert apply_reduced_generator(m, const, 0.4, np.array([0.3, 0.1])) == pytest.approx(
            0.0, abs=1e-10)

    def test_pure_frequency_symbol_action(self, models):
        # with unit symbol, the jump generator acts on cos(x) at 0 as -1
        val = apply_generator(models["cauchy1d"], cos_wave([1.0]), np.array([0.0]))
        assert val == pytest.approx(-1.0, abs=1e-6)

    def test_linear_function_sees_only_drift(self, models):
        a_vec = np.array([2.0, -1.0])
        f = TestFunction(value=lambda y: np.asarray(y) @ a_vec,
                         gradient=lambda x: a_vec, limit_at_infinity=None)
        m = models["linear2d"]
        x = np.array([0.5, 0.7])
        assert apply_generator(m, f, x) == pytest.approx(a_vec @ (B_DIAG @ x), abs=1e-8)

    def test_odd_function_at_symmetric_point(self, models):
        fodd = TestFunction(
            value=lambda y: np.asarray(y)[..., 0] ** 3 / (1 + np.sum(np.asarray(y) ** 2, axis=-1)),
            gradient=lambda x: np.zeros_like(x))
        assert apply_generator(models["linear2d"], fodd, np.zeros(2)) == pytest.approx(
            0.0, abs=1e-10)

    def test_reduced_at_time_zero_is_jump_part(self, models):
        m = models["linear2d"]
        x = np.array([0.5, 0.7])
        f = bump(center=[0.2, -0.1], radius=2.5)
        q = apply_generator(m, f, x)
        drift_term = float(np.dot(f.gradient(x), m.drift(x)))
        l0 = apply_reduced_generator(m, f, 0.0, x)
        assert abs(l0 - (q - drift_term)) <= 1e-8


class TestFlowIdentity:
    @pytest.mark.parametrize("t", [0.1, 0.5])
    def test_linear1d(self, models, t):
        f = modulated_bump([0.5], 2.0)
        assert flow_identity_residual(models["linear1d"], f, t, np.array([0.2])) <= 1e-4

    @pytest.mark.parametrize("t", [0.1, 0.5])
    def test_rotation(self, models, t):
        f = modulated_bump([0.3, -0.2], 2.5)
        assert flow_identity_residual(models["rotation"], f, t, np.array([0.4, 0.1])) <= 1e-4

    def test_tanh(self, models):
        f = modulated_bump([0.0, 0.5], 2.0, rate=0.8)
        assert flow_identity_residual(models["tanh2d"], f, 0.5, np.array([0.4, 0.1])) <= 1e-4
