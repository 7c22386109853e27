"""Rotation-rate sensitivity of the readout.

Error propagation of the population signal P = -|C| cos(phi_I) gives

    1/(dOmega)^2 = (d phi_I / d Omega)^2 sin^2(phi_I)
                   / (|C|^-2 - 1 + sin^2 phi_I),

bounded above by the quantum Fisher information, which equals
(d phi_I / d Omega)^2 when the interrogation lasts an integer number of
trap periods.  The phase is exactly linear in the rotation rate, so the
slope is analytic:

    d phi_I / d Omega = (2 pi m r^2 / hbar) {1 - sqrt(2/pi) Re W(omega0)}.

The bound saturates at full contrast, which is what makes the designed
spectrum-zero schemes optimal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QfiFormulaInvalid
from .model import SweepProfile, TrapConfig
from .interferometer import readout
from .spectrum import spectrum_numeric

__all__ = [
    "SensitivityReport",
    "delta_omega",
    "delta_omega_point",
    "phase_slope",
    "qfi",
    "sensitivity_report",
]

_TIME_TOL = 1e-8
_CONTRAST_TOL = 1e-8
# below this, 1/|C|^2 - 1 is unresolvable from zero in double precision
_EXCESS_FLOOR = 1e-16


@dataclass(frozen=True)
class SensitivityReport:
    delta_omega: float       # may be +inf
    signal_fisher: float     # 1/delta_omega^2, 0 when delta_omega is inf
    qfi: float | None
    qfi_valid: bool
    saturated: bool
    limit_evaluated: bool


def phase_slope(config: TrapConfig, profile: SweepProfile) -> float:
    """Analytic d phi_I / d Omega (the phase is linear in the rotation)."""
    w_val = spectrum_numeric(profile, config.trap_frequency).value
    return (
        2 * np.pi * config.mass * config.radius**2 / config.hbar
        * (1 - np.sqrt(2 / np.pi) * w_val.real)
    )


def _integer_periods(config: TrapConfig, profile: SweepProfile) -> bool:
    cycles = config.trap_frequency * profile.duration / (2 * np.pi)
    return abs(cycles - round(cycles)) * 2 * np.pi <= _TIME_TOL and round(cycles) >= 1


def qfi(config: TrapConfig, profile: SweepProfile) -> float:
    """Quantum Fisher information; only established for integer trap periods."""
    if not _integer_periods(config, profile):
        raise QfiFormulaInvalid(
            "Fisher-information formula requires an integer number of trap periods"
        )
    return phase_slope(config, profile) ** 2


def _delta_omega_raw(excess: float, phase: float, slope: float) -> tuple[float, bool]:
    """(uncertainty, limit_evaluated) from |C|^-2 - 1, phase, and slope."""
    s = np.sin(phase)
    if slope == 0.0:
        return np.inf, False
    if s == 0.0:
        if excess <= _EXCESS_FLOOR:
            # 0/0 point of the formula; its limit is the slope-only value
            return 1.0 / abs(slope), True
        return np.inf, False
    return float(np.sqrt(excess + s * s) / abs(slope * s)), False


def delta_omega_point(contrast: float, phase: float, slope: float) -> float:
    """Uncertainty for explicitly given readout values (not a profile)."""
    if not 0 < contrast <= 1:
        raise ValueError("contrast must be in (0, 1]")
    excess = (1 - contrast * contrast) / (contrast * contrast)
    return _delta_omega_raw(excess, phase, slope)[0]


def _evaluate(config: TrapConfig, profile: SweepProfile):
    result = readout(config, profile)
    # |C|^-2 - 1 = expm1(|d alpha|^2), accurate for near-unit contrast
    excess = float(np.expm1(abs(result.delta_alpha) ** 2))
    slope = phase_slope(config, profile)
    value, limit = _delta_omega_raw(excess, result.phase, slope)
    return result, slope, value, limit


def delta_omega(config: TrapConfig, profile: SweepProfile) -> float:
    """Standard error of the rotation estimate from the population signal."""
    return _evaluate(config, profile)[2]


def sensitivity_report(config: TrapConfig, profile: SweepProfile) -> SensitivityReport:
    result, slope, value, limit = _evaluate(config, profile)
    valid = _integer_periods(config, profile)
    fisher = 0.0 if np.isinf(value) else 1.0 / (value * value)
    saturated = valid and result.contrast >= 1 - _CONTRAST_TOL
    return SensitivityReport(
        delta_omega=value,
        signal_fisher=fisher,
        qfi=slope**2 if valid else None,
        qfi_valid=valid,
        saturated=saturated,
        limit_evaluated=limit,
    )
