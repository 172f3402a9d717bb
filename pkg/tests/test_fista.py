"""Accelerated proximal gradient behavior on quadratic models."""

import numpy as np
import pytest

from sqamin import QuadraticModel, Telemetry, fista_composite, soft_threshold

from helpers import quadratic_l1_minimizer


def _model_pieces(model, tally=None):
    smooth = lambda z: model.smooth_eval(z, tally)
    penalty = lambda z: model.mu * float(np.abs(z).sum())
    prox = lambda v, t: soft_threshold(v, t * model.mu)
    return smooth, penalty, prox


class TestFistaComposite:
    def test_identity_hessian_one_step(self):
        n = 6
        x_ref = np.array([1.0, -2.0, 0.5, 0.0, 3.0, -1.0])
        model = QuadraticModel(x_ref, np.zeros(n), 0.0, lambda v: v.copy(), 0.0)
        smooth, penalty, prox = _model_pieces(model)
        rng = np.random.default_rng(0)
        start = rng.normal(size=n) * 5
        res = fista_composite(smooth, penalty, prox, start, max_iter=1,
                              lipschitz0=1.0)
        np.testing.assert_allclose(res.solution, x_ref, atol=1e-12)

    def test_diagonal_case_matches_closed_form(self):
        D = np.array([2.0, 0.5])
        x_ref = np.array([1.0, -1.0])
        g_ref = np.array([0.3, -0.4])
        mu = 0.25
        model = QuadraticModel(x_ref, g_ref, 0.0, lambda v: D * v, mu)
        # separable: minimize g_i (z - xr) + D_i/2 (z - xr)^2 + mu |z|
        w = x_ref - g_ref / D
        expected = np.sign(w) * np.maximum(np.abs(w) - mu / D, 0.0)
        smooth, penalty, prox = _model_pieces(model)
        res = fista_composite(smooth, penalty, prox, np.zeros(2),
                              max_iter=4000, lipschitz0=2.0)
        np.testing.assert_allclose(res.solution, expected, atol=1e-8)

    def test_vacuous_stop_returns_start(self):
        model = QuadraticModel(np.zeros(2), np.ones(2), 0.0,
                               lambda v: v.copy(), 0.1)
        smooth, penalty, prox = _model_pieces(model)
        start = np.array([5.0, -3.0])
        res = fista_composite(smooth, penalty, prox, start,
                              stop=lambda x, fx, gx: True, max_iter=50)
        assert res.status == "converged"
        assert res.inner_iterations == 0
        np.testing.assert_array_equal(res.solution, start)

    def test_iteration_cap_is_status_not_error(self):
        rng = np.random.default_rng(1)
        A = rng.normal(size=(5, 5))
        H = A @ A.T + np.eye(5)
        model = QuadraticModel(rng.normal(size=5), rng.normal(size=5), 0.0,
                               lambda v: H @ v, 0.3)
        smooth, penalty, prox = _model_pieces(model)
        res = fista_composite(smooth, penalty, prox, model.x_ref, max_iter=3)
        assert res.status == "iteration_cap"
        assert res.inner_iterations == 3

    def test_two_hessian_products_per_iteration(self):
        # one product at the momentum point, one at the candidate; the
        # monotone fallback adds its own and is reported
        rng = np.random.default_rng(2)
        A = rng.normal(size=(8, 8))
        H = A @ A.T + np.eye(8)
        L_true = float(np.linalg.eigvalsh(H).max())
        mu = 0.3
        model = QuadraticModel(rng.normal(size=8), rng.normal(size=8), 1.5,
                               lambda v: H @ v, mu)
        for K in (5, 10, 20):
            tally = Telemetry()
            smooth, penalty, prox = _model_pieces(model, tally)
            res = fista_composite(smooth, penalty, prox, model.x_ref,
                                  max_iter=K, lipschitz0=1.01 * L_true)
            expected = 2 * K + 1 + res.monotone_fallbacks
            assert tally.hess_vec_products == expected

    def test_objective_monotone_along_iterates(self):
        rng = np.random.default_rng(3)
        A = rng.normal(size=(6, 6))
        H = A @ A.T + 0.1 * np.eye(6)
        mu = 0.4
        model = QuadraticModel(rng.normal(size=6), rng.normal(size=6), 0.0,
                               lambda v: H @ v, mu)
        values = []

        def record(x, fx, gx):
            values.append(fx + mu * np.abs(x).sum())
            return False

        smooth, penalty, prox = _model_pieces(model)
        fista_composite(smooth, penalty, prox, model.x_ref, stop=record,
                        max_iter=200)
        diffs = np.diff(np.array(values))
        assert np.all(diffs <= 1e-10)

    def test_converges_to_face_enumeration_minimizer(self):
        rng = np.random.default_rng(4)
        A = rng.normal(size=(4, 4))
        H = A @ A.T + np.eye(4)
        mu = 0.5
        x_ref = rng.normal(size=4)
        g_ref = rng.normal(size=4)
        model = QuadraticModel(x_ref, g_ref, 0.0, lambda v: H @ v, mu)
        c = g_ref - H @ x_ref
        expected, _ = quadratic_l1_minimizer(H, c, mu)
        smooth, penalty, prox = _model_pieces(model)
        res = fista_composite(smooth, penalty, prox, x_ref, max_iter=5000)
        np.testing.assert_allclose(res.solution, expected, atol=1e-7)

    def test_model_decrease_recorded(self):
        rng = np.random.default_rng(5)
        model = QuadraticModel(rng.normal(size=3), rng.normal(size=3), 0.0,
                               lambda v: v.copy(), 0.2)
        smooth, penalty, prox = _model_pieces(model)
        res = fista_composite(smooth, penalty, prox, model.x_ref, max_iter=100)
        q0 = model.value(model.x_ref)
        qf = model.value(res.solution)
        assert res.model_decrease == pytest.approx(q0 - qf, abs=1e-12)
        assert res.model_decrease >= 0

    def test_infeasible_start_rejected(self):
        smooth = lambda z: (np.inf, None)
        with pytest.raises(ValueError):
            fista_composite(smooth, lambda z: 0.0, lambda v, t: v,
                            np.zeros(2), max_iter=5)

    def test_stop_checked_at_start_and_every_iterate(self):
        rng = np.random.default_rng(6)
        model = QuadraticModel(rng.normal(size=4), rng.normal(size=4), 0.0,
                               lambda v: v.copy(), 0.2)
        calls = []

        def stop(x, fx, gx):
            calls.append(x.copy())
            return False

        smooth, penalty, prox = _model_pieces(model)
        res = fista_composite(smooth, penalty, prox, model.x_ref, stop=stop,
                              max_iter=17)
        assert len(calls) == res.inner_iterations + 1
        np.testing.assert_array_equal(calls[0], model.x_ref)
