"""Outer loop: inexactness-gated model minimization with backtracking search.

Each outer iteration freezes a quadratic model at the current iterate, runs
the configured inner solver until the candidate satisfies the inexactness
conditions (model residual reduced by the forcing factor eta, plus model
decrease), then backtracks along the resulting direction until the composite
objective decrease is at least ``theta`` times the decrease of the piecewise
linear model.  A direct accelerated proximal gradient run on the original
objective serves as the baseline.
"""

import time
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .fista import fista_composite
from .lbfgs import LbfgsStore
from .model import ConvergenceReport, QuadraticModel, Telemetry, TraceRow
from .obm import obm_solve
from .prox import is_optimal, residual, soft_threshold

__all__ = [
    "eta_schedule",
    "InexactnessReport",
    "inexactness_check",
    "LineSearchResult",
    "outer_line_search",
    "OuterIterationRecord",
    "sqa_solve",
    "fista_baseline_solve",
]

ALPHA_UNDERFLOW = 1e-14


def eta_schedule(k, floor=0.1, cap=0.9):
    """Forcing factor for outer iteration ``k >= 1``: ``max(1/k, floor)``,
    capped below one (the raw rule at k=1 would give 1.0, which is not a
    valid forcing factor)."""
    if k < 1:
        raise ValueError(f"outer iteration index must be >= 1, got {k}")
    return min(cap, max(1.0 / k, floor))


def _eta_value(config, k, residual_norm2):
    if config.eta_rule == "inverse_k":
        return eta_schedule(k, config.eta_floor, config.eta_cap)
    if config.eta_rule == "residual":
        return min(config.eta_cap, residual_norm2)
    return min(config.eta_cap, config.eta_constant)


@dataclass
class InexactnessReport:
    """Both sides of both inexactness inequalities at a candidate point."""

    ok: bool
    residual_norm: float
    residual_bound: float
    q_candidate: float
    q_reference: float
    decrease_lhs: float
    decrease_rhs: float
    mode: str

    def __bool__(self):
        return self.ok


def _inexactness_from_eval(model, x_hat, sval, sgrad, eta, tau, mode, zeta,
                           ref_residual_norm):
    """Evaluate the inexactness conditions from a precomputed smooth eval."""
    x_hat = np.asarray(x_hat, dtype=float)
    Fq = sgrad - np.clip(sgrad - x_hat / tau, -model.mu, model.mu)
    rnorm = float(np.linalg.norm(Fq))
    bound = eta * ref_residual_norm
    q_hat = sval + model.mu * float(np.abs(x_hat).sum())
    q_ref = model.reference_objective()
    lhs = q_hat - q_ref
    if mode == "simple":
        rhs = 0.0
        decrease_ok = lhs < 0.0
    else:
        rhs = zeta * (model.linear_value(x_hat) - q_ref)
        decrease_ok = lhs <= rhs
    return InexactnessReport(
        ok=(rnorm <= bound) and decrease_ok,
        residual_norm=rnorm,
        residual_bound=bound,
        q_candidate=q_hat,
        q_reference=q_ref,
        decrease_lhs=lhs,
        decrease_rhs=rhs,
        mode=mode,
    )


def inexactness_check(model, x_hat, eta, tau, mode="strengthened", zeta=0.25,
                      tally=None):
    """Is ``x_hat`` an acceptable approximate minimizer of the model?

    Requires the model residual norm at ``x_hat`` to be at most ``eta`` times
    the residual norm at the reference point, together with model decrease:
    simple mode asks for any decrease, strengthened mode for at least
    ``zeta`` times the linear model's decrease.  Costs one Hessian-vector
    product.  The returned report is truthy iff both conditions hold and
    carries both sides of both inequalities.
    """
    ref_norm = float(
        np.linalg.norm(residual(model.x_ref, model.g_ref, tau, model.mu))
    )
    sval, sgrad = model.smooth_eval(x_hat, tally)
    return _inexactness_from_eval(model, x_hat, sval, sgrad, eta, tau, mode,
                                  zeta, ref_norm)


def _make_inner_stop(model, eta, tau, mode, zeta, ref_residual_norm):
    def stop(x, sval, sgrad):
        return _inexactness_from_eval(model, x, sval, sgrad, eta, tau, mode,
                                      zeta, ref_residual_norm)

    return stop


class LineSearchResult(NamedTuple):
    alpha: float
    x_next: np.ndarray
    f_next: float
    phi_next: float
    trials: int


def outer_line_search(problem, model, d, theta=0.1, backtrack_factor=0.5,
                      tally=None):
    """Backtrack from a unit step until the composite objective decrease is
    at least ``theta`` times the linear model decrease.

    Each trial evaluates the smooth value once (counted).  Step length
    underflow signals violated preconditions (the direction must carry
    positive linear-model decrease) and raises.
    """
    d = np.asarray(d, dtype=float)
    if not np.any(d):
        raise ValueError("line search direction is zero")
    phi_ref = model.reference_objective()
    alpha = 1.0
    trials = 0
    while alpha >= ALPHA_UNDERFLOW:
        x_trial = model.x_ref + alpha * d
        f_trial = problem.value(x_trial)
        if tally is not None:
            tally.fg_evaluations += 1
        trials += 1
        phi_trial = f_trial + problem.mu * float(np.abs(x_trial).sum())
        linear_decrease = phi_ref - model.linear_value(x_trial)
        if phi_ref - phi_trial >= theta * linear_decrease:
            return LineSearchResult(alpha, x_trial, f_trial, phi_trial, trials)
        alpha *= backtrack_factor
    raise RuntimeError(
        "line search step length underflow; direction does not satisfy the "
        "inexactness preconditions or the oracle is inconsistent"
    )


@dataclass
class OuterIterationRecord:
    """Observer payload describing one accepted outer iteration."""

    k: int
    x: np.ndarray
    x_hat: np.ndarray
    x_next: np.ndarray
    eta: float
    alpha: float
    residual_norm2: float
    residual_inf: float
    ell_reference: float
    ell_candidate: float
    q_reference: float
    q_candidate: float
    inner: object
    model: QuadraticModel


def sqa_solve(problem, config, hessian_source="exact", observer=None):
    """Successive quadratic approximation loop.

    ``hessian_source`` selects the model Hessian backend: ``"exact"`` wires
    the problem's Hessian-vector oracle at the current iterate, ``"lbfgs"``
    maintains correction pairs from outer gradient differences.  Returns the
    final iterate and a :class:`ConvergenceReport` whose trace holds one row
    per accepted step (row 0 is the starting point).

    The inner solver is stopped by the inexactness conditions with forcing
    factor from the configured eta rule.  If it exhausts its iteration cap
    having decreased the model, the step is still used (descent is implied
    by model decrease); otherwise the run aborts with status
    ``"inner_stall"``.
    """
    if hessian_source not in ("exact", "lbfgs"):
        raise ValueError(f"unknown hessian source {hessian_source!r}")
    if config.inner_solver == "obm_qn" and hessian_source != "lbfgs":
        raise ValueError(
            "the quasi-Newton subspace solver minimizes the correction-pair "
            "model; use hessian_source='lbfgs' with inner_solver='obm_qn'"
        )
    tally = Telemetry()
    t0 = time.perf_counter()
    mu, tau = problem.mu, config.tau
    x = problem.start_point()
    fx = problem.value(x)
    gx = problem.gradient(x)
    tally.fg_evaluations += 1
    store = LbfgsStore(config.lbfgs_memory) if hessian_source == "lbfgs" else None
    F = residual(x, gx, tau, mu)
    res_inf = float(np.max(np.abs(F))) if F.size else 0.0
    trace = [TraceRow(0, fx + mu * float(np.abs(x).sum()), res_inf, 0.0, 0, 0.0)]
    penalty = lambda z: mu * float(np.abs(z).sum())
    prox = lambda v, t: soft_threshold(v, t * mu)
    k = 0
    status = None
    warm_lipschitz = 1.0
    while not is_optimal(F, config.tol_inf) and k < config.max_outer:
        k += 1
        res_norm2 = float(np.linalg.norm(F))
        if store is not None:
            hess_op = store.hessian_vec
        else:
            hess_op = lambda v, _x=x: problem.hess_vec(_x, v)
        model = QuadraticModel(x, gx, fx, hess_op, mu)
        eta = _eta_value(config, k, res_norm2)
        stop = _make_inner_stop(model, eta, tau, config.inexactness_mode,
                                config.zeta, res_norm2)
        if config.inner_solver == "fista":
            smooth = lambda z, _m=model: _m.smooth_eval(z, tally)
            inner = fista_composite(smooth, penalty, prox, x, stop=stop,
                                    max_iter=config.max_inner,
                                    lipschitz0=warm_lipschitz)
            if np.isfinite(inner.lipschitz):
                warm_lipschitz = inner.lipschitz
        else:
            variant = "cg" if config.inner_solver == "obm_cg" else "qn"
            inner = obm_solve(model, x, variant, stop, outer_k=k, store=store,
                              max_iter=config.max_inner, tally=tally)
        tally.inner_iterations += inner.inner_iterations
        if inner.status != "converged" and not inner.model_decrease > 0.0:
            status = "inner_stall"
            k -= 1
            break
        d = inner.solution - x
        if not np.any(d):
            status = "inner_stall"
            k -= 1
            break
        ls = outer_line_search(problem, model, d, config.theta,
                               config.backtrack_factor, tally)
        g_next = problem.gradient(ls.x_next)  # same point as the accepted
        # trial, so it does not open a new evaluation point
        if store is not None:
            if not store.update(ls.x_next - x, g_next - gx):
                tally.lbfgs_skipped_updates += 1
        if observer is not None:
            observer(
                OuterIterationRecord(
                    k=k,
                    x=x,
                    x_hat=inner.solution,
                    x_next=ls.x_next,
                    eta=eta,
                    alpha=ls.alpha,
                    residual_norm2=res_norm2,
                    residual_inf=res_inf,
                    ell_reference=model.reference_objective(),
                    ell_candidate=model.linear_value(inner.solution),
                    q_reference=model.reference_objective(),
                    q_candidate=model.reference_objective() - inner.model_decrease,
                    inner=inner,
                    model=model,
                )
            )
        x, fx, gx = ls.x_next, ls.f_next, g_next
        F = residual(x, gx, tau, mu)
        res_inf = float(np.max(np.abs(F)))
        trace.append(TraceRow(k, ls.phi_next, res_inf, ls.alpha,
                              inner.inner_iterations, eta))
    if status is None:
        status = "converged" if is_optimal(F, config.tol_inf) else "iteration_cap"
    tally.outer_iterations = k
    report = ConvergenceReport(
        solver="sqa_" + config.inner_solver,
        status=status,
        outer_iterations=k,
        inner_iterations=tally.inner_iterations,
        fg_evaluations=tally.fg_evaluations,
        hess_vec_products=tally.hess_vec_products,
        wall_time_seconds=time.perf_counter() - t0,
        final_residual_inf=res_inf,
        trace=trace,
    )
    return x, report


def fista_baseline_solve(problem, config):
    """Accelerated proximal gradient applied directly to the objective.

    No quadratic models and no Hessian-vector products; one evaluation point
    per smooth call, two per iteration plus backtracking.  Terminates on the
    max-norm of the optimality residual.
    """
    tally = Telemetry()
    t0 = time.perf_counter()
    mu, tau = problem.mu, config.tau
    trace = []

    def smooth(z):
        val = problem.value(z)
        tally.fg_evaluations += 1
        if not np.isfinite(val):
            return val, None
        return val, problem.gradient(z)

    class _Stop:
        def __init__(self):
            self.calls = 0

        def __call__(self, z, fz, gz):
            F = residual(z, gz, tau, mu)
            r_inf = float(np.max(np.abs(F))) if F.size else 0.0
            phi = fz + mu * float(np.abs(z).sum())
            trace.append(TraceRow(self.calls, phi, r_inf,
                                  0.0 if self.calls == 0 else 1.0, 0, 0.0))
            self.calls += 1
            rep = InexactnessReport(
                ok=r_inf <= config.tol_inf,
                residual_norm=float(np.linalg.norm(F)),
                residual_bound=config.tol_inf,
                q_candidate=phi,
                q_reference=np.nan,
                decrease_lhs=np.nan,
                decrease_rhs=np.nan,
                mode="termination",
            )
            return rep

    penalty = lambda z: mu * float(np.abs(z).sum())
    prox = lambda v, t: soft_threshold(v, t * mu)
    result = fista_composite(smooth, penalty, prox, problem.start_point(),
                             stop=_Stop(), max_iter=config.max_outer,
                             lipschitz0=1.0)
    tally.outer_iterations = result.inner_iterations
    report = ConvergenceReport(
        solver="fista",
        status=result.status,
        outer_iterations=result.inner_iterations,
        inner_iterations=0,
        fg_evaluations=tally.fg_evaluations,
        hess_vec_products=tally.hess_vec_products,
        wall_time_seconds=time.perf_counter() - t0,
        final_residual_inf=trace[-1].residual_inf if trace else float("nan"),
        trace=trace,
    )
    return result.solution, report
