"""Composite problems, the per-iteration quadratic model, configuration, telemetry.

A :class:`CompositeProblem` bundles a smooth convex oracle with an l1 penalty
weight.  Each outer iteration of the solver freezes a :class:`QuadraticModel`
snapshot (reference point, gradient, Hessian operator) whose inexact
minimization produces the step.  All evaluation counters live in a
:class:`Telemetry` record owned by one run and threaded explicitly through
calls; the oracles themselves are pure.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "CompositeProblem",
    "QuadraticModel",
    "SolverConfig",
    "Telemetry",
    "TraceRow",
    "ConvergenceReport",
    "AnalysisConstants",
]

INNER_SOLVERS = ("fista", "obm_cg", "obm_qn")
INEXACTNESS_MODES = ("simple", "strengthened")
ETA_RULES = ("inverse_k", "residual", "constant")


@dataclass
class Telemetry:
    """Mutable per-run counters. Single-owner; never shared across runs.

    ``fg_evaluations`` counts distinct points at which the smooth oracle was
    evaluated (value, gradient, or both at the same point count once).
    ``hess_vec_products`` counts every application of the model Hessian
    operator, whichever backend (exact or quasi-Newton) provides it.
    """

    outer_iterations: int = 0
    inner_iterations: int = 0
    fg_evaluations: int = 0
    hess_vec_products: int = 0
    lbfgs_skipped_updates: int = 0
    lbfgs_fallback_solves: int = 0


@dataclass(frozen=True)
class CompositeProblem:
    """A smooth convex oracle plus an l1 penalty weight.

    ``value``, ``gradient`` and ``hess_vec`` evaluate the smooth part; the
    full objective is ``value(x) + mu * ||x||_1``.  ``x0`` overrides the
    default all-zeros starting point (needed when zero lies outside the
    smooth part's domain, e.g. for log-det objectives).
    """

    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hess_vec: Callable[[np.ndarray, np.ndarray], np.ndarray]
    dim: int
    mu: float
    x0: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu}")
        if self.x0 is not None and np.asarray(self.x0).shape != (self.dim,):
            raise ValueError("x0 has wrong dimension")

    def objective(self, x):
        """Full composite objective value at ``x``."""
        return self.value(x) + self.mu * float(np.abs(x).sum())

    def start_point(self):
        if self.x0 is not None:
            return np.array(self.x0, dtype=float)
        return np.zeros(self.dim)


class QuadraticModel:
    """Frozen second-order model of the composite objective at one iterate.

    The model value is
    ``f_ref + g_ref@(x - x_ref) + 0.5*(x - x_ref)@H@(x - x_ref) + mu*||x||_1``
    and its linear underestimate drops the quadratic term.  ``hessian`` is an
    abstract symmetric positive definite linear map ``v -> H v``; it is never
    materialized here.  ``f_ref`` is cached so the model never re-calls the
    smooth oracle.
    """

    def __init__(self, x_ref, g_ref, f_ref, hessian, mu):
        self.x_ref = np.asarray(x_ref, dtype=float)
        self.g_ref = np.asarray(g_ref, dtype=float)
        if self.x_ref.shape != self.g_ref.shape:
            raise ValueError("x_ref and g_ref dimensions differ")
        self.f_ref = float(f_ref)
        self.hessian = hessian
        if mu < 0:
            raise ValueError(f"mu must be nonnegative, got {mu}")
        self.mu = float(mu)

    @property
    def dim(self):
        return self.x_ref.shape[0]

    def _check_dim(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != self.x_ref.shape:
            raise ValueError(f"expected dimension {self.dim}, got shape {x.shape}")
        return x

    def apply_hessian(self, v, tally=None):
        """Apply the Hessian operator; counts one Hessian-vector product."""
        if tally is not None:
            tally.hess_vec_products += 1
        return self.hessian(v)

    def smooth_eval(self, x, tally=None):
        """Value and gradient of the smooth (quadratic) part at ``x``.

        One Hessian-vector product yields both, since the gradient is
        ``g_ref + H dx`` and the value needs ``dx @ H dx``.
        """
        x = self._check_dim(x)
        dx = x - self.x_ref
        hdx = self.apply_hessian(dx, tally)
        val = self.f_ref + float(self.g_ref @ dx) + 0.5 * float(dx @ hdx)
        return val, self.g_ref + hdx

    def value(self, x, tally=None):
        """Full model value (smooth part plus l1 term); one Hessian product."""
        sval, _ = self.smooth_eval(x, tally)
        return sval + self.mu * float(np.abs(x).sum())

    def linear_value(self, x):
        """Piecewise linear underestimate: drops the quadratic term."""
        x = self._check_dim(x)
        return (
            self.f_ref
            + float(self.g_ref @ (x - self.x_ref))
            + self.mu * float(np.abs(x).sum())
        )

    def smooth_gradient(self, x, tally=None):
        """Gradient of the smooth part, ``g_ref + H (x - x_ref)``."""
        x = self._check_dim(x)
        return self.g_ref + self.apply_hessian(x - self.x_ref, tally)

    def reference_objective(self):
        """Model value at the reference point (no Hessian product needed)."""
        return self.f_ref + self.mu * float(np.abs(self.x_ref).sum())


@dataclass
class SolverConfig:
    """Configuration shared by the composite solvers.

    ``zeta`` may equal ``theta`` (the classical experimental setting), but
    the sufficient-decrease theory behind unit-step acceptance assumes
    ``zeta`` strictly between ``theta`` and 1/2.
    """

    theta: float = 0.1
    zeta: float = 0.25
    tau: float = 0.5
    tol_inf: float = 1e-5
    max_outer: int = 3000
    eta_floor: float = 0.1
    eta_cap: float = 0.9
    inner_solver: str = "fista"
    inexactness_mode: str = "strengthened"
    lbfgs_memory: int = 50
    max_inner: int = 1000
    backtrack_factor: float = 0.5
    seed: int = 0
    eta_rule: str = "inverse_k"
    eta_constant: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.theta < 0.5:
            raise ValueError(f"theta must lie in (0, 1/2), got {self.theta}")
        if not self.theta <= self.zeta < 0.5:
            raise ValueError(f"zeta must lie in [theta, 1/2), got {self.zeta}")
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        if self.tol_inf <= 0:
            raise ValueError("tol_inf must be positive")
        if self.max_outer < 1 or self.max_inner < 1:
            raise ValueError("iteration limits must be positive")
        if not 0.0 <= self.eta_floor <= self.eta_cap < 1.0:
            raise ValueError("need 0 <= eta_floor <= eta_cap < 1")
        if self.inner_solver not in INNER_SOLVERS:
            raise ValueError(f"unknown inner solver {self.inner_solver!r}")
        if self.inexactness_mode not in INEXACTNESS_MODES:
            raise ValueError(f"unknown inexactness mode {self.inexactness_mode!r}")
        if self.eta_rule not in ETA_RULES:
            raise ValueError(f"unknown eta rule {self.eta_rule!r}")
        if self.lbfgs_memory < 1:
            raise ValueError("lbfgs_memory must be positive")
        if not 0.0 < self.backtrack_factor < 1.0:
            raise ValueError("backtrack_factor must lie in (0, 1)")


@dataclass
class TraceRow:
    """One accepted outer iteration: objective, residual, step, inner work."""

    k: int
    objective: float
    residual_inf: float
    alpha: float
    inner_iterations: int
    eta: float


@dataclass
class ConvergenceReport:
    """Per-run counters and the accepted-iterate trace."""

    solver: str
    status: str
    outer_iterations: int
    inner_iterations: int
    fg_evaluations: int
    hess_vec_products: int
    wall_time_seconds: float
    final_residual_inf: float
    trace: list = field(default_factory=list)

    def objective_values(self):
        return np.array([row.objective for row in self.trace])


@dataclass(frozen=True)
class AnalysisConstants:
    """Spectral constants of a small dense instance, for property audits.

    ``gamma`` is the guaranteed linear-model decrease coefficient
    ``0.5*lambda_min*((1 - eta)/(1/tau + 2*lambda_max))**2`` relating the
    accepted step's linear decrease to the squared optimality residual.
    Computed by test harnesses from dense eigendecompositions; never used
    inside the solvers.
    """

    lambda_min: float
    lambda_max: float
    lipschitz: float
    gamma: float

    @staticmethod
    def gamma_coefficient(lambda_min, lambda_max, eta, tau):
        return 0.5 * lambda_min * ((1.0 - eta) / (1.0 / tau + 2.0 * lambda_max)) ** 2

    @classmethod
    def from_spectrum(cls, eigenvalues, eta, tau, lipschitz=None):
        eigenvalues = np.asarray(eigenvalues, dtype=float)
        lo = float(eigenvalues.min())
        hi = float(eigenvalues.max())
        if lipschitz is None:
            lipschitz = hi
        return cls(
            lambda_min=lo,
            lambda_max=hi,
            lipschitz=float(lipschitz),
            gamma=cls.gamma_coefficient(lo, hi, eta, tau),
        )
