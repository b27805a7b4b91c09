"""Monte Carlo goodness-of-fit checks of the samplers against their analytic laws."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import path_statistics as ps
from .errors import ParameterDomainError

KS_THRESHOLD = 0.01
# Asymptotic Kolmogorov critical value at alpha = 0.001; loosens the KS
# threshold for small samples.
KS_C_ALPHA = 1.949

_MODEL_TAGS = {"path_count": 1, "gev": 2, "gev_truncated": 3}


@dataclass
class GofReport:
    model: str
    class_id: int | None
    cluster: int
    n: int
    ks_statistic: float | None = None
    empirical_mean: float | None = None
    empirical_variance: float | None = None
    analytic_mean: float | None = None
    analytic_variance: float | None = None
    thresholds: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    note: str = ""

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def cell_rng(seed: int, model: str, i: int, k: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(_MODEL_TAGS[model], int(i), int(k)))
    return np.random.default_rng(ss)


def ks_statistic(samples, cdf: Callable) -> float:
    """Two-sided Kolmogorov-Smirnov distance between samples and a continuous CDF."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    d = max(np.max(i / n - f), np.max(f - (i - 1) / n))
    return float(min(max(d, 0.0), 1.0))


def ks_threshold(n: int) -> float:
    return max(KS_THRESHOLD, KS_C_ALPHA / math.sqrt(n))


def _norm_cdf(z):
    return 0.5 * (1.0 + np.vectorize(math.erf)(np.asarray(z) / math.sqrt(2.0)))


def clamped_rounded_moments(mu: float, var: float, width: float = 12.0) -> tuple[float, float]:
    """Exact mean and variance of ``max(1, round(N(mu, var)))``.

    Summed over the lattice pmf ``P(n) = Phi((n+.5-mu)/s) - Phi((n-.5-mu)/s)``.
    """
    s = math.sqrt(var)
    hi = int(math.ceil(mu + width * s)) + 1
    n = np.arange(1, hi + 1)
    upper = _norm_cdf((n + 0.5 - mu) / s)
    lower = _norm_cdf((n - 0.5 - mu) / s)
    pmf = upper - lower
    pmf[0] = upper[0]  # all mass rounding to <= 1 is clamped to 1
    mean = float(np.sum(n * pmf))
    return mean, float(np.sum((n - mean) ** 2 * pmf))


def validate_path_counts(
    i: int,
    k: int,
    n: int,
    rng: np.random.Generator,
    variance: float | None = None,
) -> GofReport:
    """Compare ``n`` path-count draws with the Gaussian moments.

    Mean: ``|mean - mu| <= 0.5 + 3*sigma/sqrt(n)``.
    Variance: compared with the exact variance of the clamped, rounded law at
    tolerance ``1/12 + 5*var*sqrt(2/n)``; clamping at one path shrinks the
    variance below ``var`` for classes with small means.
    """
    mu = ps.path_count_mean(i, k)
    var = ps.path_count_variance(i, k) if variance is None else variance
    draws = ps.sample_path_count(i, k, rng, size=n, variance=var)
    emp_mean = float(draws.mean())
    emp_var = float(draws.var(ddof=1)) if n > 1 else 0.0
    sigma = math.sqrt(var)
    mean_tol = 0.5 + 3 * sigma / math.sqrt(n)
    rep = GofReport(
        model="path_count", class_id=i, cluster=k, n=n,
        empirical_mean=emp_mean, empirical_variance=emp_var,
        analytic_mean=mu, analytic_variance=var,
    )
    rep.thresholds["mean_abs"] = mean_tol
    rep.checks["mean"] = abs(emp_mean - mu) <= mean_tol
    if var == 0:
        rep.note = "degenerate variance; analytic variance comparison skipped"
        rep.checks["variance_zero"] = emp_var == 0
        return rep
    ref_mean, ref_var = clamped_rounded_moments(mu, var)
    var_tol = 1 / 12 + 5 * var * math.sqrt(2 / n)
    rep.thresholds["variance_abs"] = var_tol
    rep.thresholds["reference_variance"] = ref_var
    rep.thresholds["reference_mean"] = ref_mean
    rep.checks["variance"] = abs(emp_var - ref_var) <= var_tol
    return rep


def validate_gev(
    i: int,
    k: int,
    n: int,
    rng: np.random.Generator,
    truncated: bool = False,
    cap: float = ps.DEFAULT_GEV_CAP,
) -> GofReport:
    """KS and median check of the interval sampler.

    Moments of the GEV do not exist for ``xi >= 1``, so shape is compared via
    the KS distance and the median rather than mean/variance.
    """
    p = ps.gev_params(i, k)
    if truncated:
        x = ps.sample_interval(p, rng, cap=cap, size=n)
        cdf = lambda t: ps.truncated_gev_cdf(t, p, cap)  # noqa: E731
        lo, hi = ps.gev_cdf(0.0, p), ps.gev_cdf(cap, p)
        median = float(ps.gev_ppf(lo + 0.5 * (hi - lo), p))
        model = "gev_truncated"
    else:
        x = ps.sample_gev(p, rng, size=n)
        cdf = lambda t: ps.gev_cdf(t, p)  # noqa: E731
        median = p.median()
        lo, hi = 0.0, 1.0
        model = "gev"
    d = ks_statistic(x, cdf)
    emp_median = float(np.median(x))
    # Sample median s.e. is 1/(2 f(m) sqrt(n)); allow four of them.
    f_m = ps.gev_pdf(median, p) / (hi - lo)
    median_tol = 4.0 / (2 * f_m * math.sqrt(n))
    rep = GofReport(model=model, class_id=i, cluster=k, n=n, ks_statistic=d)
    rep.thresholds = {"ks": ks_threshold(n), "median_abs": median_tol, "analytic_median": median}
    rep.checks = {"ks": d < ks_threshold(n), "median": abs(emp_median - median) <= median_tol}
    rep.note = f"xi={p.xi:.6g} eta={p.eta:.6g} eps={p.eps:.6g} empirical_median={emp_median:.6g}"
    return rep


def validate_magnitude_profile(k: int, row: ps.DoubleExponential | None = None, j_max: int = 199) -> GofReport:
    """Deterministic check that the other-path magnitude is positive and strictly decaying in j."""
    j = np.arange(j_max + 1)
    vals = row(j) if row is not None else ps.other_path_magnitude(k, j)
    rep = GofReport(model="magnitude_profile", class_id=None, cluster=k, n=j.size)
    rep.checks = {
        "positive": bool(np.all(vals > 0)),
        "strictly_decreasing": bool(np.all(np.diff(vals) < 0)),
    }
    return rep


def validate_cell(i: int, k: int, n: int, seed: int) -> list[GofReport]:
    reports = [validate_path_counts(i, k, n, cell_rng(seed, "path_count", i, k))]
    reports.append(validate_gev(i, k, n, cell_rng(seed, "gev", i, k)))
    reports.append(validate_gev(i, k, n, cell_rng(seed, "gev_truncated", i, k), truncated=True))
    if k <= ps.MAX_TABLE_CLUSTER:
        reports.append(validate_magnitude_profile(k))
    return reports


def validate_lattice(
    n: int,
    seed: int,
    classes: Iterable[int] = (2, 3, 4, 5),
    clusters: Iterable[int] = range(1, ps.MAX_TABLE_CLUSTER + 1),
) -> tuple[list[GofReport], list[dict]]:
    """Run every cell; cells with an invalid GEV scale are listed as skipped."""
    reports, skipped = [], []
    clusters = list(clusters)
    for i in classes:
        for k in clusters:
            reports.append(validate_path_counts(i, k, n, cell_rng(seed, "path_count", i, k)))
            try:
                ps.gev_params(i, k)
            except ParameterDomainError:
                skipped.append({"model": "gev", "class_id": i, "cluster": k, "reason": "skipped: invalid η"})
                continue
            reports.append(validate_gev(i, k, n, cell_rng(seed, "gev", i, k)))
            reports.append(validate_gev(i, k, n, cell_rng(seed, "gev_truncated", i, k), truncated=True))
    for k in clusters:
        if k <= ps.MAX_TABLE_CLUSTER:
            reports.append(validate_magnitude_profile(k))
    return reports, skipped


def report_document(reports: list[GofReport], skipped: list[dict] | None = None) -> dict:
    skipped = skipped or []
    passed = sum(r.passed for r in reports)
    return {
        "summary": {
            "cells": len(reports),
            "passed": passed,
            "failed": len(reports) - passed,
            "skipped": len(skipped),
        },
        "reports": [r.to_dict() for r in reports],
        "skipped": skipped,
    }


def write_report(path, reports: list[GofReport], skipped: list[dict] | None = None) -> dict:
    doc = report_document(reports, skipped)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
    return doc
