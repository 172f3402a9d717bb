"""Independent oracles shared across the test modules.

Everything here recomputes expected values by a route different from the
library code under test: dense materialization, finite differences, grid
search, face enumeration, or plain long-running fixed-point iteration.
"""

import itertools

import numpy as np


def central_difference_gradient(f, x, h=1e-6):
    """Central finite differences of a scalar function, coordinate by
    coordinate."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


def directional_second_difference(grad, x, v, h=1e-6):
    """Central finite difference of a gradient along direction v."""
    return (grad(x + h * v) - grad(x - h * v)) / (2.0 * h)


def materialize_operator(apply_fn, n):
    """Dense matrix of a linear operator by applying it to basis vectors."""
    cols = [apply_fn(e) for e in np.eye(n)]
    return np.column_stack(cols)


def dense_model_value(model, x):
    """Model value recomputed with explicit dense matrix arithmetic."""
    n = model.dim
    H = materialize_operator(model.hessian, n)
    dx = np.asarray(x, dtype=float) - model.x_ref
    return (
        model.f_ref
        + model.g_ref @ dx
        + 0.5 * dx @ H @ dx
        + model.mu * np.abs(x).sum()
    )


def scalar_prox_grid(v, t, lo=None, hi=None, step=1e-4):
    """Grid-search argmin of 0.5*(x - v)**2 + t*|x|."""
    if lo is None:
        lo = -abs(v) - 1.0
    if hi is None:
        hi = abs(v) + 1.0
    grid = np.arange(lo, hi + step, step)
    vals = 0.5 * (grid - v) ** 2 + t * np.abs(grid)
    return grid[np.argmin(vals)]


def quadratic_l1_minimizer(H, c, mu):
    """Global minimizer of 0.5*z@H@z + c@z + mu*||z||_1 by face enumeration.

    Enumerates all 3**n sign patterns, solves the equality-constrained
    stationary system on each face, keeps sign-feasible candidates, and
    returns the one with the lowest objective.  Exact (up to the linear
    solves) for small n.
    """
    n = H.shape[0]
    best = None
    best_val = np.inf

    def objective(z):
        return 0.5 * z @ H @ z + c @ z + mu * np.abs(z).sum()

    for pattern in itertools.product((-1, 0, 1), repeat=n):
        omega = np.array(pattern, dtype=float)
        free = omega != 0
        z = np.zeros(n)
        if np.any(free):
            rhs = -(c[free] + mu * omega[free])
            try:
                z[free] = np.linalg.solve(H[np.ix_(free, free)], rhs)
            except np.linalg.LinAlgError:
                continue
            if np.any(z[free] * omega[free] < 0):
                continue
        val = objective(z)
        if val < best_val - 1e-15:
            best_val = val
            best = z
    return best, best_val


def model_exact_minimizer(model):
    """Exact minimizer of a small dense quadratic model via face enumeration."""
    n = model.dim
    H = materialize_operator(model.hessian, n)
    # shift to z = x - x_ref is avoided: minimize directly over x with
    # 0.5 x@H@x + (g_ref - H x_ref)@x + mu*||x||_1 (constant terms dropped)
    c = model.g_ref - H @ model.x_ref
    z, _ = quadratic_l1_minimizer(H, c, model.mu)
    return z


def coordinate_descent_l1_quadratic(H, c, mu, z0, sweeps=2000, tol=1e-14):
    """Cyclic coordinate descent on 0.5*z@H@z + c@z + mu*||z||_1.

    Each coordinate update is the exact scalar soft-threshold solution.
    Independent of the solvers under test.
    """
    z = np.array(z0, dtype=float)
    n = z.size
    for _ in range(sweeps):
        shift = 0.0
        for i in range(n):
            grad_i = H[i] @ z + c[i]
            rest = grad_i - H[i, i] * z[i]
            new = -rest / H[i, i]
            new = np.sign(new) * max(abs(new) - mu / H[i, i], 0.0)
            shift = max(shift, abs(new - z[i]))
            z[i] = new
        if shift <= tol:
            break
    return z


def long_run_ista(value_grad, x0, tau_step, mu, iters=200000, tol=1e-12):
    """Plain proximal-gradient fixed-point iteration run to high accuracy."""
    x = np.array(x0, dtype=float)
    for _ in range(iters):
        g = value_grad(x)
        x_new = np.sign(x - tau_step * g) * np.maximum(
            np.abs(x - tau_step * g) - tau_step * mu, 0.0
        )
        if np.max(np.abs(x_new - x)) <= tol:
            return x_new
        x = x_new
    return x
