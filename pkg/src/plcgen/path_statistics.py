"""Fitted statistics of PLC multipath channels: path count, magnitudes, intervals.

Channels are indexed by a class ``i`` (1..5) and a cluster ``k`` (>= 1).

* path count: ``round(N(mu_ik, var_ik))`` with power-law moments in ``k``
  (classes 2..5 only);
* first-arrival magnitude: double exponential in ``k`` (classes 1..5);
* other-path magnitude: double exponential in the time-sample index ``j``,
  one row per cluster ``k`` in 1..20;
* path interval: GEV with location/scale/shape given as functions of ``k``
  (classes 2..5).

The fitted constants live in ``data/tables.json`` and are parsed with
:class:`decimal.Decimal` so they can be re-emitted exactly as tabulated.
"""

from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Mapping

import numpy as np

from .errors import (
    DataIntegrityError,
    ParameterDomainError,
    TruncationError,
    UnsupportedClassError,
    UnsupportedClusterError,
)

MAX_TABLE_CLUSTER = 20
DEFAULT_GEV_CAP = 50.0
MAX_REJECTIONS = 1000


# --------------------------------------------------------------------------
# Parameter containers
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PathCountRow:
    p1: float
    p2: float
    p3: float
    q1: float
    q2: float
    q3: float

    def mean(self, k: int) -> float:
        return self.p1 * k**self.p2 + self.p3

    def variance(self, k: int) -> float:
        return self.q1 * k**self.q2 + self.q3


@dataclass(frozen=True)
class DoubleExponential:
    """``a*exp(b*x) + c*exp(d*x)``."""

    a: float
    b: float
    c: float
    d: float

    def __call__(self, x):
        return self.a * np.exp(self.b * x) + self.c * np.exp(self.d * x)

    @property
    def decays(self) -> bool:
        return self.a > 0 and self.c > 0 and self.b < 0 and self.d < 0


@dataclass(frozen=True)
class ClusterFunction:
    """Parameter as a function of cluster index: ``a*k**b + c`` or ``a*k + b``."""

    form: str
    a: float
    b: float
    c: float = 0.0
    symbol: str = ""

    def __call__(self, k: int) -> float:
        if self.form == "power":
            return self.a * k**self.b + self.c
        if self.form == "linear":
            return self.a * k + self.b
        raise DataIntegrityError(f"unknown parameter form {self.form!r}")


@dataclass(frozen=True)
class GevCoefficients:
    xi: ClusterFunction
    eta: ClusterFunction
    eps: ClusterFunction


@dataclass(frozen=True)
class GevParams:
    """GEV shape ``xi``, scale ``eta`` and location ``eps`` (interval units)."""

    xi: float
    eta: float
    eps: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ParameterDomainError(f"GEV scale eta must be > 0, got {self.eta!r}")

    @property
    def lower_bound(self) -> float:
        """Lower support bound; ``-inf`` unless ``xi > 0``."""
        if self.xi > 0:
            return self.eps - self.eta / self.xi
        return -math.inf

    @property
    def upper_bound(self) -> float:
        if self.xi < 0:
            return self.eps - self.eta / self.xi
        return math.inf

    def median(self) -> float:
        return float(gev_ppf(0.5, self))


@dataclass(frozen=True)
class DistributionParameterSet:
    version: str
    path_count: Mapping[int, PathCountRow]
    first_arrival: Mapping[int, DoubleExponential]
    other_path: Mapping[int, DoubleExponential]
    gev: Mapping[int, GevCoefficients]

    @classmethod
    def from_mapping(cls, raw: Mapping) -> "DistributionParameterSet":
        def f(v):
            return float(v)

        path_count = {
            int(i): PathCountRow(*(f(row[s]) for s in ("p1", "p2", "p3", "q1", "q2", "q3")))
            for i, row in raw["path_count"].items()
        }
        first_arrival = {
            int(i): DoubleExponential(f(row["aM"]), f(row["bM"]), f(row["cM"]), f(row["dM"]))
            for i, row in raw["first_arrival"].items()
        }
        other_path = {
            int(k): DoubleExponential(f(row["ao"]), f(row["bo"]), f(row["co"]), f(row["do"]))
            for k, row in raw["other_path"].items()
        }
        gev = {}
        for i, entry in raw["gev"].items():
            funcs = {}
            for name in ("xi", "eta", "eps"):
                e = entry[name]
                funcs[name] = ClusterFunction(
                    form=e["form"], a=f(e["a"]), b=f(e["b"]), c=f(e.get("c", 0)),
                    symbol=e.get("symbol", name),
                )
            gev[int(i)] = GevCoefficients(**funcs)
        params = cls(str(raw["version"]), path_count, first_arrival, other_path, gev)
        params.check()
        return params

    def check(self) -> None:
        """Raise :class:`DataIntegrityError` if any load-time invariant fails."""
        for i, row in self.path_count.items():
            for k in range(1, MAX_TABLE_CLUSTER + 1):
                if not row.variance(k) > 0:
                    raise DataIntegrityError(f"path-count variance <= 0 for class {i}, cluster {k}")
        for label, table in (("first_arrival", self.first_arrival), ("other_path", self.other_path)):
            for key, row in table.items():
                if not row.decays:
                    raise DataIntegrityError(f"{label} row {key} is not a decaying profile")


def _read_raw():
    text = resources.files(__package__).joinpath("data/tables.json").read_text(encoding="utf-8")
    return json.loads(text, parse_float=decimal.Decimal)


@lru_cache(maxsize=None)
def default_parameters() -> DistributionParameterSet:
    return DistributionParameterSet.from_mapping(_read_raw())


def _encode(obj, indent: int = 0) -> str:
    # json.dumps cannot emit Decimal verbatim; keep the tabulated digit strings.
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list):
        items = [pad + _encode(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if isinstance(obj, decimal.Decimal):
        return str(obj)
    return json.dumps(obj)


def dump_parameters_json(raw: Mapping | None = None) -> str:
    """Serialize the embedded constant set with every number as tabulated."""
    return _encode(_read_raw() if raw is None else raw) + "\n"


def parse_parameters_json(text: str) -> dict:
    return json.loads(text, parse_float=decimal.Decimal)


# --------------------------------------------------------------------------
# Index checks
# --------------------------------------------------------------------------


def _check_cluster(k: int) -> None:
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise UnsupportedClusterError(f"cluster index must be an integer >= 1, got {k!r}")


def _row(table: Mapping, key: int, what: str):
    try:
        return table[key]
    except KeyError:
        raise UnsupportedClassError(
            f"class {key!r} has no {what} model (supported: {sorted(table)})"
        ) from None


# --------------------------------------------------------------------------
# Path count
# --------------------------------------------------------------------------


def path_count_mean(i: int, k: int, params: DistributionParameterSet | None = None) -> float:
    """Mean of the Gaussian underlying the path count, ``p1*k**p2 + p3``."""
    params = params or default_parameters()
    _check_cluster(k)
    return _row(params.path_count, i, "path-count").mean(k)


def path_count_variance(i: int, k: int, params: DistributionParameterSet | None = None) -> float:
    """Variance of the Gaussian underlying the path count, ``q1*k**q2 + q3``."""
    params = params or default_parameters()
    _check_cluster(k)
    var = _row(params.path_count, i, "path-count").variance(k)
    if not var > 0:
        raise DataIntegrityError(f"path-count variance {var!r} <= 0 for class {i}, cluster {k}")
    return var


def round_half_away(x):
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def sample_path_count(
    i: int,
    k: int,
    rng: np.random.Generator,
    size: int | None = None,
    variance: float | None = None,
    params: DistributionParameterSet | None = None,
):
    """Draw path counts: nearest integer (half away from zero) of a Gaussian, at least 1.

    ``variance`` overrides the fitted variance; ``variance=0`` makes the draw
    deterministic, which tests use to pin the rounding rule.
    """
    mu = path_count_mean(i, k, params)
    var = path_count_variance(i, k, params) if variance is None else variance
    x = rng.normal(mu, math.sqrt(var), size=size)
    n = np.maximum(round_half_away(x), 1).astype(np.int64)
    return int(n) if size is None else n


# --------------------------------------------------------------------------
# Magnitudes
# --------------------------------------------------------------------------


def first_arrival_magnitude(i: int, k, params: DistributionParameterSet | None = None):
    params = params or default_parameters()
    row = _row(params.first_arrival, i, "first-arrival magnitude")
    if np.ndim(k) == 0:
        _check_cluster(k)
        return float(row(k))
    k = np.asarray(k)
    if np.any(k < 1):
        raise UnsupportedClusterError("cluster index must be >= 1")
    return row(k)


def other_path_magnitude(k: int, j, params: DistributionParameterSet | None = None):
    """Magnitude of a non-first path at time-sample index ``j`` (0 = first arrival)."""
    params = params or default_parameters()
    _check_cluster(k)
    row = params.other_path.get(k)
    if row is None:
        raise UnsupportedClusterError(
            f"other-path magnitudes are tabulated for clusters 1..{MAX_TABLE_CLUSTER}, got {k}"
        )
    if np.any(np.asarray(j) < 0):
        raise ValueError("time-sample index j must be >= 0")
    return float(row(j)) if np.ndim(j) == 0 else row(np.asarray(j))


# --------------------------------------------------------------------------
# GEV path intervals
# --------------------------------------------------------------------------


def gev_params(i: int, k: int, params: DistributionParameterSet | None = None) -> GevParams:
    """GEV parameters of the path-interval distribution for class ``i``, cluster ``k``.

    Raises ParameterDomainError where the fitted scale is not positive (Class V,
    k <= 11).
    """
    params = params or default_parameters()
    _check_cluster(k)
    coeffs = _row(params.gev, i, "path-interval")
    xi, eta, eps = coeffs.xi(k), coeffs.eta(k), coeffs.eps(k)
    if not eta > 0:
        raise ParameterDomainError(
            f"GEV scale for class {i}, cluster {k} is {eta:.6g} <= 0; no valid interval model"
        )
    return GevParams(xi=xi, eta=eta, eps=eps)


def _reduced(x, p: GevParams):
    return 1.0 + p.xi * (np.asarray(x, dtype=float) - p.eps) / p.eta


def gev_pdf(x, p: GevParams):
    """GEV density; zero outside the support."""
    x = np.asarray(x, dtype=float)
    if p.xi == 0:
        z = (x - p.eps) / p.eta
        out = np.exp(-z - np.exp(-z)) / p.eta
        return float(out) if out.ndim == 0 else out
    t = _reduced(x, p)
    inside = t > 0
    ts = np.where(inside, t, 1.0)
    with np.errstate(over="ignore"):
        s = np.exp(-np.log(ts) / p.xi)  # t**(-1/xi)
        out = np.where(inside, s / ts * np.exp(-s) / p.eta, 0.0)
    return float(out) if out.ndim == 0 else out


def gev_cdf(x, p: GevParams):
    """GEV distribution function ``exp(-(1 + xi*(x-eps)/eta)**(-1/xi))``."""
    x = np.asarray(x, dtype=float)
    if p.xi == 0:
        out = np.exp(-np.exp(-(x - p.eps) / p.eta))
        return float(out) if out.ndim == 0 else out
    t = _reduced(x, p)
    inside = t > 0
    ts = np.where(inside, t, 1.0)
    with np.errstate(over="ignore"):
        val = np.exp(-np.exp(-np.log(ts) / p.xi))
    below = 0.0 if p.xi > 0 else 1.0
    out = np.where(inside, val, below)
    return float(out) if out.ndim == 0 else out


def gev_ppf(u, p: GevParams):
    """Inverse CDF: ``eps + eta*((-ln u)**(-xi) - 1)/xi`` (Gumbel form at ``xi == 0``)."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore", over="ignore"):
        w = -np.log(u)
        if p.xi == 0:
            out = p.eps - p.eta * np.log(w)
        else:
            out = p.eps + p.eta * (np.exp(-p.xi * np.log(w)) - 1.0) / p.xi
    return float(out) if out.ndim == 0 else out


def sample_gev(p: GevParams, rng: np.random.Generator, size: int | None = None):
    """Untruncated inverse-CDF GEV draws."""
    return gev_ppf(rng.random(size), p)


def truncated_gev_cdf(x, p: GevParams, cap: float = DEFAULT_GEV_CAP):
    """CDF of the GEV conditioned on ``0 < x <= cap``."""
    lo, hi = gev_cdf(0.0, p), gev_cdf(cap, p)
    x = np.clip(np.asarray(x, dtype=float), 0.0, cap)
    out = (gev_cdf(x, p) - lo) / (hi - lo)
    return float(out) if np.ndim(out) == 0 else out


def sample_interval(
    p: GevParams,
    rng: np.random.Generator,
    cap: float = DEFAULT_GEV_CAP,
    size: int | None = None,
    max_rejections: int = MAX_REJECTIONS,
):
    """GEV draws restricted to ``0 < x <= cap`` by rejection.

    Every rejected variate is redrawn; after ``max_rejections`` redraws of any
    single variate a TruncationError is raised.
    """
    out = np.atleast_1d(np.asarray(sample_gev(p, rng, 1 if size is None else size), dtype=float))
    bad = ~((out > 0) & (out <= cap))
    rounds = 0
    while bad.any():
        if rounds >= max_rejections:
            raise TruncationError(
                f"no GEV interval in (0, {cap}] after {max_rejections} redraws "
                f"(xi={p.xi:.4g}, eta={p.eta:.4g}, eps={p.eps:.4g})"
            )
        out[bad] = sample_gev(p, rng, int(bad.sum()))
        bad = ~((out > 0) & (out <= cap))
        rounds += 1
    return float(out[0]) if size is None else out


def valid_gev_cells(classes=(2, 3, 4, 5), clusters=range(1, MAX_TABLE_CLUSTER + 1)):
    """(i, k) pairs whose GEV scale is positive."""
    cells = []
    for i in classes:
        for k in clusters:
            try:
                gev_params(i, k)
            except ParameterDomainError:
                continue
            cells.append((i, k))
    return cells
