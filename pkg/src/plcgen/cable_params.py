"""Per-unit-length line parameters for NAYY four-conductor power cables.

Two adjacent conductors are treated as a two-wire line. Geometry is given by
the conductor spacing ``a`` (PVC gap) and the conductor radius ``r``; the
geometry factor entering C and L is the plain ratio ``r / a``.

All quantities are SI: meters, hertz, farads, henries, ohms, siemens.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, fields

from .errors import DomainError

# Material constants as tabulated for the cable data sheet. MU_0 and EPS_0 are
# kept at the tabulated precision rather than CODATA so results are reproducible.
KAPPA_COPPER = 58e6  # S/m
TAN_DELTA_PVC = 0.025
EPS_R_PVC = 4.0
EPS_0 = 8.5419e-12  # F/m
MU_R_COPPER = 1.0
MU_0 = 1.2566e-6  # H/m


@dataclass(frozen=True)
class CableSpec:
    """Geometry and material constants of one cable type.

    Attributes:
        name: Cable identifier, e.g. ``"NAYY150"``.
        a: Spacing between two adjacent conductors in m.
        r: Conductor radius in m.
    """

    name: str
    a: float
    r: float
    kappa: float = KAPPA_COPPER
    tan_delta: float = TAN_DELTA_PVC
    eps_r: float = EPS_R_PVC
    eps_0: float = EPS_0
    mu_r: float = MU_R_COPPER
    mu_0: float = MU_0

    def __post_init__(self):
        for f in fields(self):
            if f.name == "name":
                continue
            value = getattr(self, f.name)
            if not value > 0:
                raise DomainError(f"cable field {f.name} must be > 0, got {value!r}")

    @property
    def geometry_ratio(self) -> float:
        return self.r / self.a


NAYY150 = CableSpec("NAYY150", a=1.8e-3, r=6.9099e-3)
NAYY35 = CableSpec("NAYY35", a=1.2e-3, r=5.9161e-3)

CABLES = {"nayy150": NAYY150, "nayy35": NAYY35}


def get_cable(name: str) -> CableSpec:
    """Look up a cable by case-insensitive name."""
    try:
        return CABLES[name.lower()]
    except KeyError:
        raise KeyError(f"unknown cable {name!r}; choose from {sorted(CABLES)}") from None


@dataclass(frozen=True)
class LumpedLineParams:
    c_per_m: float
    l_per_m: float
    r_per_m: float
    g_per_m: float
    freq_hz: float


def _check_freq(freq_hz: float) -> None:
    if not freq_hz >= 0:
        raise DomainError(f"frequency must be >= 0 Hz, got {freq_hz!r}")


def capacitance_per_length(cable: CableSpec) -> float:
    """C = eps_0 * eps_r * r / a, in F/m."""
    return cable.eps_0 * cable.eps_r * cable.r / cable.a


def inductance_per_length(cable: CableSpec) -> float:
    """L = mu_0 * mu_r * r / a, in H/m."""
    return cable.mu_0 * cable.mu_r * cable.r / cable.a


def resistance_per_length(cable: CableSpec, freq_hz: float) -> float:
    """Skin-effect resistance sqrt(pi * mu_0 * f / (kappa * r**2)), in ohm/m."""
    _check_freq(freq_hz)
    return math.sqrt(math.pi * cable.mu_0 * freq_hz / (cable.kappa * cable.r**2))


def conductance_per_length(cable: CableSpec, freq_hz: float) -> float:
    """Dielectric loss conductance 2*pi*f*C*tan(delta), in S/m."""
    _check_freq(freq_hz)
    return 2 * math.pi * freq_hz * capacitance_per_length(cable) * cable.tan_delta


def lumped_params(cable: CableSpec, freq_hz: float) -> LumpedLineParams:
    return LumpedLineParams(
        c_per_m=capacitance_per_length(cable),
        l_per_m=inductance_per_length(cable),
        r_per_m=resistance_per_length(cable, freq_hz),
        g_per_m=conductance_per_length(cable, freq_hz),
        freq_hz=freq_hz,
    )


def phase_velocity(cable: CableSpec) -> float:
    """Lossless phase velocity 1/sqrt(LC) in m/s."""
    return 1.0 / math.sqrt(inductance_per_length(cable) * capacitance_per_length(cable))


def char_impedance(cable: CableSpec, freq_hz: float, lossless: bool = False) -> complex:
    """Characteristic impedance sqrt((R + jwL) / (G + jwC)).

    At ``freq_hz == 0`` or with ``lossless=True`` the loss terms are dropped
    and the real value sqrt(L/C) is returned. With losses, the high-frequency
    limit is sqrt(L/C) / sqrt(1 - j*tan_delta) since G/(wC) is constant.
    """
    _check_freq(freq_hz)
    l_ = inductance_per_length(cable)
    c = capacitance_per_length(cable)
    if lossless or freq_hz == 0:
        return complex(math.sqrt(l_ / c), 0.0)
    w = 2 * math.pi * freq_hz
    z = resistance_per_length(cable, freq_hz) + 1j * w * l_
    y = conductance_per_length(cable, freq_hz) + 1j * w * c
    return cmath.sqrt(z / y)
