"""Data ingestion, run specification, and report emission.

Supports SVMLight-format classification data ("label idx:val idx:val ..."
with 1-based indices), whitespace-delimited dense matrices, and JSON/CSV
convergence reports with a fixed schema.
"""

import csv
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse

from .model import ConvergenceReport, SolverConfig, TraceRow
from .objectives import CovarianceProblem, LogisticDataset

__all__ = [
    "SvmlightParseError",
    "RunSpec",
    "parse_svmlight",
    "write_svmlight",
    "load_dense_matrix",
    "sample_covariance",
    "write_report",
    "read_report",
]

SOLVERS = ("fista", "sqa_fista", "sqa_obm_cg", "sqa_obm_qn")
PROBLEM_KINDS = ("logistic", "covariance", "synthetic")

_SUMMARY_FIELDS = (
    "outer_iterations",
    "inner_iterations",
    "fg_evaluations",
    "hess_vec_products",
    "wall_time_seconds",
    "final_residual_inf",
)
_TRACE_FIELDS = ("k", "objective", "residual_inf", "alpha",
                 "inner_iterations", "eta")


class SvmlightParseError(ValueError):
    """Malformed SVMLight input; the message carries the line number."""


@dataclass
class RunSpec:
    """One benchmark run: problem source, solver choice, report sink."""

    problem_kind: str
    data_path: Optional[str] = None
    samples_path: Optional[str] = None
    mu: Optional[float] = None
    solver: str = "sqa_obm_cg"
    config: SolverConfig = field(default_factory=SolverConfig)
    report_path: Optional[str] = None
    report_format: str = "json"
    dimension: int = 50
    condition: float = 100.0

    def __post_init__(self):
        if self.problem_kind not in PROBLEM_KINDS:
            raise ValueError(f"unknown problem kind {self.problem_kind!r}")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.report_format not in ("json", "csv"):
            raise ValueError(f"unknown report format {self.report_format!r}")
        if self.problem_kind == "logistic" and self.data_path is None:
            raise ValueError("logistic problems require a data path")
        if self.problem_kind == "covariance" and self.data_path is None \
                and self.samples_path is None:
            raise ValueError("covariance problems require a matrix or samples path")


def parse_svmlight(path, n_features=None):
    """Parse "label idx:val ..." lines into a :class:`LogisticDataset`.

    Indices are 1-based in the file and strictly increasing within a line;
    any positive label maps to +1, everything else to -1; text after '#' is
    ignored.  The feature count is inferred from the largest index unless
    ``n_features`` overrides it (it must then cover every index seen).
    """
    labels = []
    indptr = [0]
    indices = []
    values = []
    max_index = 0
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            try:
                label = float(tokens[0])
            except ValueError as exc:
                raise SvmlightParseError(
                    f"{path}:{lineno}: bad label {tokens[0]!r}") from exc
            labels.append(1.0 if label > 0 else -1.0)
            previous = 0
            for token in tokens[1:]:
                part = token.split(":")
                if len(part) != 2:
                    raise SvmlightParseError(
                        f"{path}:{lineno}: bad feature token {token!r}")
                try:
                    idx = int(part[0])
                    val = float(part[1])
                except ValueError as exc:
                    raise SvmlightParseError(
                        f"{path}:{lineno}: bad feature token {token!r}") from exc
                if idx < 1:
                    raise SvmlightParseError(
                        f"{path}:{lineno}: index {idx} is not positive")
                if idx <= previous:
                    raise SvmlightParseError(
                        f"{path}:{lineno}: indices not strictly increasing")
                previous = idx
                indices.append(idx - 1)
                values.append(val)
            max_index = max(max_index, previous)
            indptr.append(len(indices))
    n = max_index if n_features is None else int(n_features)
    if n < max_index:
        raise SvmlightParseError(
            f"{path}: n_features={n} smaller than largest index {max_index}")
    matrix = scipy.sparse.csr_matrix(
        (np.array(values, dtype=float),
         np.array(indices, dtype=np.int32),
         np.array(indptr, dtype=np.int32)),
        shape=(len(labels), n),
    )
    return LogisticDataset(matrix, np.array(labels))


def write_svmlight(data, path):
    """Emit a dataset in SVMLight format; values use round-tripping repr."""
    Z = data.features
    with open(path, "w", encoding="utf-8") as handle:
        for i in range(data.n_samples):
            row = Z.indices[Z.indptr[i]:Z.indptr[i + 1]]
            vals = Z.data[Z.indptr[i]:Z.indptr[i + 1]]
            label = "+1" if data.labels[i] > 0 else "-1"
            pairs = " ".join(f"{j + 1}:{float(v)!r}" for j, v in zip(row, vals))
            handle.write(f"{label} {pairs}".rstrip() + "\n")


def load_dense_matrix(path):
    """Whitespace-delimited rows of reals as a 2-D float array."""
    matrix = np.loadtxt(path, dtype=float)
    return np.atleast_2d(matrix)


def sample_covariance(samples):
    """Maximum-likelihood (1/N-normalized) covariance of the sample rows."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    n_samples = samples.shape[0]
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    centered = samples - samples.mean(axis=0)
    S = (centered.T @ centered) / n_samples
    S = 0.5 * (S + S.T)
    return CovarianceProblem(S)


def _report_payload(report, spec=None):
    payload = {
        "solver": report.solver,
        "status": report.status,
        "outer_iterations": report.outer_iterations,
        "inner_iterations": report.inner_iterations,
        "fg_evaluations": report.fg_evaluations,
        "hess_vec_products": report.hess_vec_products,
        "wall_time_seconds": report.wall_time_seconds,
        "final_residual_inf": report.final_residual_inf,
        "trace": [
            {
                "k": row.k,
                "objective": row.objective,
                "residual_inf": row.residual_inf,
                "alpha": row.alpha,
                "inner_iterations": row.inner_iterations,
                "eta": row.eta,
            }
            for row in report.trace
        ],
    }
    if spec is not None:
        payload["problem"] = spec.problem_kind
        payload["mu"] = spec.mu
        payload["seed"] = spec.config.seed
    return payload


def write_report(report, spec, path, report_format="json"):
    """Emit counters plus the per-iteration trace as JSON or CSV.

    The CSV layout is one summary header row and its values (exactly the six
    counter/result columns, in stable order), then a trace section with its
    own header.
    """
    try:
        if report_format == "json":
            with open(path, "w", encoding="utf-8") as handle:
                json.dump(_report_payload(report, spec), handle, indent=2)
                handle.write("\n")
        elif report_format == "csv":
            with open(path, "w", encoding="utf-8", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(_SUMMARY_FIELDS)
                writer.writerow([getattr(report, name) for name in _SUMMARY_FIELDS])
                writer.writerow(_TRACE_FIELDS)
                for row in report.trace:
                    writer.writerow([row.k, row.objective, row.residual_inf,
                                     row.alpha, row.inner_iterations, row.eta])
        else:
            raise ValueError(f"unknown report format {report_format!r}")
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_report(path):
    """Load a JSON report back into a :class:`ConvergenceReport`."""
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    trace = [
        TraceRow(row["k"], row["objective"], row["residual_inf"],
                 row["alpha"], row["inner_iterations"], row["eta"])
        for row in payload["trace"]
    ]
    return ConvergenceReport(
        solver=payload["solver"],
        status=payload["status"],
        outer_iterations=payload["outer_iterations"],
        inner_iterations=payload["inner_iterations"],
        fg_evaluations=payload["fg_evaluations"],
        hess_vec_products=payload["hess_vec_products"],
        wall_time_seconds=payload["wall_time_seconds"],
        final_residual_inf=payload["final_residual_inf"],
        trace=trace,
    )
