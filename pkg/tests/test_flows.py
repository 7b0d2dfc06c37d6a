"""Flow maps, variational Jacobians, Liouville determinants, and the
empirical flow-bound certificates."""

import numpy as np
import pytest
from scipy.linalg import expm

from levyflow.errors import DomainError
from levyflow.flows import FlowEngine, certify_flow_bounds, drift_field

B_DIAG = np.diag([1.0, -2.0])


@pytest.fixture(scope="module")
def engines():
    return {
        "zero": FlowEngine(drift_field("zero", dim=2)),
        "linear": FlowEngine(drift_field("linear", matrix=B_DIAG)),
        "rotation": FlowEngine(drift_field("rotation")),
        "tanh": FlowEngine(drift_field("tanh", dim=2, amplitude=0.5)),
    }


@pytest.fixture(scope="module")
def points():
    rng = np.random.default_rng(101)
    return rng.normal(scale=1.5, size=(20, 2))


def rotation_matrix(t):
    """Inverse-flow matrix of the catalog rotation drift."""
    return np.array([[np.cos(t), np.sin(t)], [-np.sin(t), np.cos(t)]])


class TestForwardFlow:
    def test_zero_drift_identity(self, engines, points):
        assert np.allclose(engines["zero"].forward(0.8, points), points, atol=0)

    @pytest.mark.parametrize("t", [-1.0, -0.3, 0.45, 1.0])
    def test_rotation_closed_form(self, engines, t):
        x = np.array([1.0, 0.5])
        assert engines["rotation"].forward(t, x) == pytest.approx(
            rotation_matrix(-t) @ x, abs=1e-9)
        assert engines["rotation"].inverse(t, x) == pytest.approx(
            rotation_matrix(t) @ x, abs=1e-9)

    @pytest.mark.parametrize("t", [-1.0, 0.25, 1.0])
    def test_linear_matrix_exponential(self, engines, t):
        x = np.array([0.7, -0.2])
        assert engines["linear"].forward(t, x) == pytest.approx(expm(B_DIAG * t) @ x, abs=1e-8)

    def test_inverse_is_forward_of_negated_time(self, engines):
        x = np.array([0.4, 1.1])
        eng = engines["tanh"]
        assert eng.inverse(0.6, x) == pytest.approx(eng.forward(-0.6, x), abs=1e-12)

    def test_horizon_enforced(self, engines):
        with pytest.raises(DomainError):
            engines["zero"].forward(5.0, np.zeros(2))


class TestFlowProperties:
    @pytest.mark.parametrize("name", ["zero", "linear", "rotation", "tanh"])
    @pytest.mark.parametrize("t", [-1.0, 0.5, 1.0])
    def test_round_trip(self, engines, points, name, t):
        eng = engines[name]
        back = eng.inverse(t, eng.forward(t, points))
        assert np.max(np.abs(back - points)) <= 1e-8

    @pytest.mark.parametrize("name", ["rotation", "tanh"])
    def test_group_property(self, engines, points, name):
        eng = engines[name]
        t, s = 0.5, -0.3
        direct = eng.forward(t + s, points)
        composed = eng.forward(t, eng.forward(s, points))
        assert np.max(np.abs(direct - composed)) <= 1e-8

    @pytest.mark.parametrize("name", ["linear", "rotation", "tanh"])
    def test_jacobian_chain_rule(self, engines, points, name):
        eng = engines[name]
        t = 0.7
        fwd = eng.forward(t, points)
        jac_inv = eng.inverse_jacobian(t, fwd)
        jac_fwd = eng.forward_jacobian(t, points)
        prod = np.einsum("mij,mjk->mik", jac_inv, jac_fwd)
        eye = np.broadcast_to(np.eye(2), prod.shape)
        assert np.max(np.abs(prod - eye)) <= 1e-6

    def test_forward_path_multiple_times(self, engines):
        eng = engines["rotation"]
        x = np.array([1.0, 0.0])
        ts = np.array([-0.8, -0.2, 0.0, 0.4, 1.0])
        path = eng.forward_path(ts, x)
        for t, pt in zip(ts, path):
            assert pt == pytest.approx(rotation_matrix(-t) @ x, abs=1e-8)


class TestJacobian:
    def test_zero_drift_identity_matrix(self, engines):
        jac = engines["zero"].inverse_jacobian(0.9, np.array([0.3, 0.4]))
        assert np.allclose(jac, np.eye(2), atol=0)

    @pytest.mark.parametrize("t", [0.3, 1.0, -0.8])
    def test_linear_matches_matrix_exponential(self, engines, t):
        jac = engines["linear"].inverse_jacobian(t, np.array([0.5, 0.5]))
        assert np.max(np.abs(jac - expm(-B_DIAG * t))) <= 1e-8

    def test_generic_matches_finite_differences(self, engines, points):
        eng = engines["tanh"]
        t = 1.0
        step = 1e-5
        jac = eng.inverse_jacobian(t, points[:5])
        for m in range(5):
            for j in range(2):
                e = np.zeros(2)
                e[j] = step
                fd = (eng.inverse(t, points[m] + e) - eng.inverse(t, points[m] - e)) / (2 * step)
                assert np.abs(jac[m, :, j] - fd).max() <= 1e-4 * max(1.0, np.abs(fd).max())

    def test_finite_difference_fallback_jacobian(self):
        field = drift_field("tanh", dim=2, amplitude=0.5)
        no_jac = type(field)(fn=field.fn, jacobian=None, dim=2, jac_bound=0.5,
                             jac_holder_const=field.jac_holder_const,
                             jac_holder_exp=1.0, sup_bound=field.sup_bound)
        x = np.array([0.2, -0.7])
        assert np.allclose(no_jac.jac(x), field.jac(x), atol=1e-8)


class TestJacobianDeterminant:
    def test_rotation_volume_preserving(self, engines):
        for t in (-1.0, 0.4, 1.0):
            det = engines["rotation"].inverse_jac_det(t, np.array([1.0, 2.0]))
            assert det == pytest.approx(1.0, abs=1e-10)

    def test_linear_triangular_value(self, engines):
        # det of expm(-B t) = exp(-t * tr B) = exp(t) for tr B = -1
        det = engines["linear"].inverse_jac_det(1.0, np.array([0.1, 0.1]))
        assert det == pytest.approx(np.e, rel=1e-9)

    @pytest.mark.parametrize("name", ["zero", "linear", "rotation", "tanh"])
    def test_liouville_matches_direct_determinant(self, engines, points, name):
        eng = engines[name]
        for t in (0.5, -1.0):
            jac = eng.inverse_jacobian(t, points[:6])
            liou = eng.inverse_jac_det(t, points[:6])
            assert np.max(np.abs(liou - np.linalg.det(jac)) / liou) <= 1e-8

    @pytest.mark.parametrize("name", ["zero", "linear", "rotation", "tanh"])
    def test_gronwall_lower_bound(self, engines, points, name):
        eng = engines[name]
        c6, d = eng.drift.jac_bound, eng.drift.dim
        for t in (0.5, 1.0, -1.0):
            dets = eng.inverse_jac_det(t, points[:6])
            assert np.all(dets >= np.exp(-c6 * d * abs(t)) * (1 - 1e-9))


class TestCertificate:
    def test_zero_drift(self, engines, points):
        pairs = list(zip(points[:6], points[6:12]))
        cert = certify_flow_bounds(engines["zero"], [0.0, 0.5, 1.0], pairs)
        assert cert.lipschitz_constant == pytest.approx(1.0, abs=1e-12)
        assert cert.time_derivative_residual <= 1e-12

    def test_linear_bounded_by_matrix_exponential(self, engines, points):
        pairs = list(zip(points[:6], points[6:12]))
        cert = certify_flow_bounds(engines["linear"], [-1.0, -0.5, 0.5, 1.0], pairs)
        assert cert.lipschitz_constant <= np.linalg.norm(expm(B_DIAG), 2) + 1e-9
        assert cert.time_derivative_residual <= 1e-5

    def test_rotation_isometric(self, engines, points):
        pairs = list(zip(points[:6], points[6:12]))
        cert = certify_flow_bounds(engines["rotation"], [0.0, 0.3, 1.0], pairs)
        assert cert.lipschitz_constant == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("name", ["zero", "linear", "rotation", "tanh"])
    def test_time_derivative_identity(self, engines, points, name):
        pairs = list(zip(points[:8], points[8:16]))
        cert = certify_flow_bounds(engines[name], [-1.0, -0.4, 0.4, 1.0], pairs)
        assert cert.time_derivative_residual <= 1e-5

    def test_empty_grid_rejected(self, engines):
        with pytest.raises(DomainError):
            certify_flow_bounds(engines["zero"], [], [])


class TestCatalog:
    def test_unknown_kind(self):
        with pytest.raises(DomainError):
            drift_field("spiral")

    def test_tanh_bounded(self):
        f = drift_field("tanh", dim=3, amplitude=0.5)
        assert f.bounded and f.sup_bound == pytest.approx(0.5 * np.sqrt(3))
        x = np.array([100.0, -100.0, 0.0])
        assert np.linalg.norm(f(x)) <= f.sup_bound + 1e-12

    def test_linear_unbounded(self):
        assert not drift_field("linear", matrix=B_DIAG).bounded

    def test_declared_jacobian_bound_sampled(self):
        rng = np.random.default_rng(3)
        for kind, kwargs in [("tanh", {"dim": 2, "amplitude": 0.5}),
                             ("rotation", {}),
                             ("linear", {"matrix": B_DIAG})]:
            f = drift_field(kind, **kwargs)
            pts = rng.normal(scale=2.0, size=(50, f.dim))
            norms = np.linalg.norm(f.jac(pts), ord=2, axis=(1, 2))
            assert np.all(norms <= f.jac_bound + 1e-9)
