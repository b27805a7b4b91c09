"""Assemble random channel realizations and evaluate their frequency responses.

A realization is built path by path:

1. the path count is 1 for class 1, otherwise a rounded Gaussian draw;
2. the first path sits at distance ``k * cluster_distance_step_m`` (or an
   explicit override) with the deterministic first-arrival magnitude;
3. each further path is delayed from its predecessor by a truncated GEV
   interval and takes the other-path magnitude at its time-sample index.

Per-path cable loss ``A(f) = exp(-(a0 + a1*f**k)) * exp(-1j*b0*f)`` with ``f``
in MHz and coefficients linear in the path distance.

Random streams: realization ``n`` of a batch seeded with ``seed`` uses
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(n,)))``, so batches
are reproducible and independent of generation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Sequence

import numpy as np

from . import path_statistics as ps
from .cable_params import CableSpec, get_cable, phase_velocity
from .errors import DistanceDomainError, GridError, PlcError

MIN_PATH_DISTANCE_M = 2.0
PHASE_MODELS = ("eq11_literal", "geometric_delay")

# Cable-loss fit: coefficient = slope * d + intercept, d in meters.
LOSS_A0 = (0.0002086, 0.0008739)
LOSS_A1 = (0.00002644, -0.00004644)
LOSS_K = (-0.00009098, 0.8876)
LOSS_B0 = (-0.0006432, -0.000001126)
# k_exp reaches zero here; beyond it f**k_exp diverges at f = 0.
MAX_PATH_DISTANCE_M = -LOSS_K[1] / LOSS_K[0]


class ConfigError(PlcError, ValueError):
    exit_code = 2


@dataclass(frozen=True)
class GeneratorConfig:
    cable: str = "nayy150"
    interval_unit_s: float = 1e-6
    sample_period_s: float = 1e-7
    cluster_distance_step_m: float = 10.0
    direct_distance_m: float | None = None
    gev_cap: float = ps.DEFAULT_GEV_CAP
    phase_model: str = "eq11_literal"
    seed: int = 0

    def __post_init__(self):
        try:
            get_cable(self.cable)
        except KeyError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("interval_unit_s", "sample_period_s", "cluster_distance_step_m", "gev_cap"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.direct_distance_m is not None and not self.direct_distance_m >= MIN_PATH_DISTANCE_M:
            raise DistanceDomainError(
                f"direct_distance_m must be >= {MIN_PATH_DISTANCE_M} m, got {self.direct_distance_m!r}"
            )
        if self.phase_model not in PHASE_MODELS:
            raise ConfigError(f"phase_model must be one of {PHASE_MODELS}, got {self.phase_model!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")

    @property
    def cable_spec(self) -> CableSpec:
        return get_cable(self.cable)

    def first_path_distance(self, k: int) -> float:
        if self.direct_distance_m is not None:
            return self.direct_distance_m
        d = k * self.cluster_distance_step_m
        if d < MIN_PATH_DISTANCE_M:
            raise DistanceDomainError(f"first-path distance {d} m is below {MIN_PATH_DISTANCE_M} m")
        return d

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True)
class Path:
    delay_s: float
    magnitude: float
    distance_m: float
    j: int


@dataclass(frozen=True)
class ChannelRealization:
    class_id: int
    cluster: int
    paths: tuple[Path, ...]
    seed: int
    index: int = 0

    @property
    def delays(self) -> np.ndarray:
        return np.array([p.delay_s for p in self.paths])

    @property
    def magnitudes(self) -> np.ndarray:
        return np.array([p.magnitude for p in self.paths])

    @property
    def distances(self) -> np.ndarray:
        return np.array([p.distance_m for p in self.paths])

    def to_dict(self) -> dict:
        return {
            "class_id": self.class_id,
            "cluster": self.cluster,
            "seed": self.seed,
            "index": self.index,
            "paths": [
                {"delay_s": p.delay_s, "magnitude": p.magnitude, "distance_m": p.distance_m, "j": p.j}
                for p in self.paths
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelRealization":
        paths = tuple(
            Path(float(p["delay_s"]), float(p["magnitude"]), float(p["distance_m"]), int(p["j"]))
            for p in d["paths"]
        )
        if not paths:
            raise ValueError("realization has no paths")
        return cls(int(d["class_id"]), int(d["cluster"]), paths, int(d["seed"]), int(d.get("index", 0)))


@dataclass(frozen=True)
class CableLossCoeffs:
    a0: float
    a1: float
    k_exp: float
    b0: float


@dataclass
class FrequencyResponse:
    freq_grid_hz: np.ndarray
    h: np.ndarray
    realization: ChannelRealization | None = field(default=None, repr=False)


# --------------------------------------------------------------------------
# Random streams
# --------------------------------------------------------------------------


def realization_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(index),)))


# --------------------------------------------------------------------------
# Loss model
# --------------------------------------------------------------------------


def loss_coeffs(d: float) -> CableLossCoeffs:
    """Cable-loss coefficients for a path of ``d`` meters.

    Valid for ``2 <= d < MAX_PATH_DISTANCE_M``: below 2 m ``a1`` turns negative
    (gain rising with frequency), beyond ~9.76 km ``k_exp`` drops to zero.
    """
    if not MIN_PATH_DISTANCE_M <= d < MAX_PATH_DISTANCE_M:
        raise DistanceDomainError(
            f"path distance {d!r} m outside the loss model range "
            f"[{MIN_PATH_DISTANCE_M}, {MAX_PATH_DISTANCE_M:.1f})"
        )
    return CableLossCoeffs(
        a0=LOSS_A0[0] * d + LOSS_A0[1],
        a1=LOSS_A1[0] * d + LOSS_A1[1],
        k_exp=LOSS_K[0] * d + LOSS_K[1],
        b0=LOSS_B0[0] * d + LOSS_B0[1],
    )


def path_loss(f_mhz, coeffs: CableLossCoeffs):
    """Complex loss factor at ``f_mhz`` (MHz)."""
    f = np.asarray(f_mhz, dtype=float)
    if np.any(f < 0):
        raise GridError("frequencies must be >= 0")
    out = np.exp(-(coeffs.a0 + coeffs.a1 * f**coeffs.k_exp)) * np.exp(-1j * coeffs.b0 * f)
    return complex(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# Synthesis
# --------------------------------------------------------------------------


def synthesize(
    i: int,
    k: int,
    cfg: GeneratorConfig,
    rng: np.random.Generator,
    index: int = 0,
    params: ps.DistributionParameterSet | None = None,
) -> ChannelRealization:
    """Draw one channel realization for class ``i`` and cluster ``k``."""
    v = phase_velocity(cfg.cable_spec)
    m1 = ps.first_arrival_magnitude(i, k, params)
    d1 = cfg.first_path_distance(k)
    if i == 1:
        n_paths = 1
    else:
        # Validate every model up front so failures do not depend on the draw.
        gev = ps.gev_params(i, k, params)
        if k > ps.MAX_TABLE_CLUSTER:
            ps.other_path_magnitude(k, 0, params)
        n_paths = ps.sample_path_count(i, k, rng, params=params)

    tau1 = d1 / v
    paths = [Path(delay_s=tau1, magnitude=m1, distance_m=tau1 * v, j=0)]
    if n_paths > 1:
        x = ps.sample_interval(gev, rng, cap=cfg.gev_cap, size=n_paths - 1)
        # Accumulate left to right so each delay is its predecessor plus one interval.
        taus = tau1 + np.cumsum(x * cfg.interval_unit_s)
        js = ps.round_half_away((taus - tau1) / cfg.sample_period_s).astype(np.int64)
        mags = ps.other_path_magnitude(k, js, params)
        paths.extend(
            Path(delay_s=t, magnitude=m, distance_m=t * v, j=j)
            for t, m, j in zip(taus.tolist(), mags.tolist(), js.tolist())
        )
    return ChannelRealization(class_id=i, cluster=k, paths=tuple(paths), seed=cfg.seed, index=index)


def generate(i: int, k: int, count: int, cfg: GeneratorConfig) -> list[ChannelRealization]:
    """``count`` realizations, each on its own stream derived from ``cfg.seed``."""
    return [synthesize(i, k, cfg, realization_rng(cfg.seed, n), index=n) for n in range(count)]


# --------------------------------------------------------------------------
# Frequency and impulse response
# --------------------------------------------------------------------------


def frequency_grid(f_min_hz: float = 0.0, f_max_hz: float = 30e6, points: int = 1024) -> np.ndarray:
    if points < 2 or not 0 <= f_min_hz < f_max_hz:
        raise GridError(f"invalid grid spec f_min={f_min_hz}, f_max={f_max_hz}, points={points}")
    return np.linspace(f_min_hz, f_max_hz, points)


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise GridError("frequency grid must be a non-empty 1-D array")
    if np.any(g < 0) or not np.all(np.isfinite(g)):
        raise GridError("frequency grid must be finite and non-negative")
    if g.size > 1 and np.any(np.diff(g) <= 0):
        raise GridError("frequency grid must be strictly ascending")
    return g


def transfer_function(
    ch: ChannelRealization,
    grid_hz: Sequence[float],
    phase_model: str = "eq11_literal",
) -> FrequencyResponse:
    """Sum of per-path cable-loss factors weighted by path magnitude."""
    if phase_model not in PHASE_MODELS:
        raise ValueError(f"unknown phase model {phase_model!r}")
    f_hz = _check_grid(grid_hz)
    f_mhz = f_hz * 1e-6
    h = np.zeros(f_hz.shape, dtype=complex)
    for p in ch.paths:
        c = loss_coeffs(p.distance_m)
        att = np.exp(-(c.a0 + c.a1 * f_mhz**c.k_exp))
        if phase_model == "eq11_literal":
            phase = np.exp(-1j * c.b0 * f_mhz)
        else:
            phase = np.exp(-2j * np.pi * f_hz * p.delay_s)
        h += p.magnitude * att * phase
    return FrequencyResponse(freq_grid_hz=f_hz, h=h, realization=ch)


def _uniform_from_zero(fr: FrequencyResponse, resample: bool):
    f, h = np.asarray(fr.freq_grid_hz, dtype=float), np.asarray(fr.h, dtype=complex)
    _check_grid(f)
    if f.size < 2:
        raise GridError("need at least two frequency points")
    df = f[1] - f[0]
    uniform = np.allclose(np.diff(f), df, rtol=1e-9, atol=0) and math.isclose(f[0], 0.0, abs_tol=df * 1e-9)
    if uniform:
        return df, h
    if not resample:
        raise GridError("impulse_response needs a uniform grid starting at 0 Hz (pass resample=True)")
    # Linear interpolation onto a uniform grid 0..f_max with the same point
    # count; bins below the original f_min are zero-filled.
    ug = np.linspace(0.0, f[-1], f.size)
    hr = np.interp(ug, f, h.real, left=0.0) + 1j * np.interp(ug, f, h.imag, left=0.0)
    return ug[1] - ug[0], hr


def impulse_response(fr: FrequencyResponse, resample: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Real impulse response via Hermitian extension of ``fr.h``.

    The one-sided spectrum of ``N`` bins is treated as bins ``0..N-1`` of an
    odd-length ``2N-1`` real DFT, so no bin is a Nyquist bin and
    :func:`forward_response` reproduces ``fr.h`` exactly (up to rounding), given a
    real DC value. Returns ``(t_seconds, h_t)``.
    """
    df, h = _uniform_from_zero(fr, resample)
    n = 2 * h.size - 1
    ht = np.fft.irfft(h, n=n)
    t = np.arange(n) / (n * df)
    return t, ht


def forward_response(ht: np.ndarray) -> np.ndarray:
    """Inverse of :func:`impulse_response`: one-sided spectrum of a real series."""
    return np.fft.rfft(ht)
