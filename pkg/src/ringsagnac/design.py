"""Interrogation-time design for the three analytic sweep families.

A scheme is useful when the sweep spectrum vanishes at the trap
frequency: contrast is then maximal and the interferometer phase equals
the Sagnac phase.  For the analytic families this happens at

    flat          omega0 T = 2 K pi,          K = 1, 2, ...
    sinusoidal    omega0 T = 2 (2L + 1) pi,   L = 0, 1, ...
    cosinusoidal  omega0 T = 2 M pi,          M = 2, 3, ...

The cosinusoidal M = 1 point is excluded: the spectrum's limit there is
-sqrt(pi/2)/2, not zero.  All returned flags are re-verified numerically
rather than assumed from the rules above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConfigurationError, InvalidIndex, NoZeroInBracket, UnsupportedFamily
from .geometry import PhaseDecomposition, decompose
from .interferometer import interferometer_phase_closed, sagnac_phase
from .model import ProfileFamily, SweepProfile, TrapConfig, make_profile
from .spectrum import spectrum_closed_form, spectrum_numeric

__all__ = ["SchemeSpec", "design_time", "find_zero_time"]

_SPECTRUM_ZERO_TOL = 1e-8
_PHASE_EQUALITY_TOL = 1e-8
_QCRB_TIME_TOL = 1e-8
_OBJECTIVE_FLOOR = 1e-16
_SCAN_POINTS = 128


@dataclass(frozen=True)
class SchemeSpec:
    """A designed scheme with its numerically verified condition flags."""

    family: ProfileFamily
    index: int | None
    config: TrapConfig
    duration: float
    profile: SweepProfile
    spectrum_zero: bool
    phase_equality: bool
    qcrb_time: bool
    decomposition: PhaseDecomposition


def _verified_scheme(family, config, duration, index=None) -> SchemeSpec:
    profile = make_profile(family, duration)
    w0 = config.trap_frequency
    spectrum_zero = bool(abs(spectrum_numeric(profile, w0).value) <= _SPECTRUM_ZERO_TOL)
    phi_s = sagnac_phase(config)
    phi_i = interferometer_phase_closed(config, profile)
    phase_equality = bool(abs(phi_i - phi_s) <= _PHASE_EQUALITY_TOL * abs(phi_s))
    cycles = w0 * duration / (2 * np.pi)
    qcrb_time = bool(abs(cycles - round(cycles)) * 2 * np.pi <= _QCRB_TIME_TOL and round(cycles) >= 1)
    return SchemeSpec(
        family=ProfileFamily(family),
        index=index,
        config=config,
        duration=float(duration),
        profile=profile,
        spectrum_zero=spectrum_zero,
        phase_equality=phase_equality,
        qcrb_time=qcrb_time,
        decomposition=decompose(config, profile),
    )


def design_time(family, config: TrapConfig, index: int) -> SchemeSpec:
    """Scheme at the family's index-th admissible interrogation time."""
    family = ProfileFamily(family)
    w0 = config.trap_frequency
    if family is ProfileFamily.FLAT:
        if index < 1:
            raise InvalidIndex(f"flat scheme index starts at 1, got {index}")
        duration = 2 * index * np.pi / w0
    elif family is ProfileFamily.SINUSOIDAL:
        if index < 0:
            raise InvalidIndex(f"sinusoidal scheme index starts at 0, got {index}")
        duration = 2 * (2 * index + 1) * np.pi / w0
    elif family is ProfileFamily.COSINUSOIDAL:
        if index == 1:
            # the would-be first harmonic: spectrum limit is finite, not zero
            limit = float(spectrum_closed_form(family, 2 * np.pi / w0, w0).value.real)
            raise InvalidIndex(
                f"cosinusoidal index 1 rejected: spectrum limit {limit:.17g} is nonzero",
                limit_value=limit,
            )
        if index < 2:
            raise InvalidIndex(f"cosinusoidal scheme index starts at 2, got {index}")
        duration = 2 * index * np.pi / w0
    else:
        raise UnsupportedFamily("design rules exist only for the analytic families")
    return _verified_scheme(family, config, duration, index=index)


def _profile_for_duration(family_or_shape, duration) -> SweepProfile:
    if isinstance(family_or_shape, SweepProfile):
        shape = family_or_shape
        if shape.family is ProfileFamily.TABULATED:
            # same sample shape stretched to the new window, renormalized
            return make_profile(ProfileFamily.TABULATED, duration, samples=shape.samples)
        return make_profile(shape.family, duration)
    return make_profile(family_or_shape, duration)


def find_zero_time(family_or_shape, config: TrapConfig, bracket) -> float:
    """Interrogation time in the bracket where the spectrum vanishes.

    Minimizes |W(omega0)|^2 over the bracket (both real and imaginary
    parts must vanish for full contrast): a coarse scan localizes the
    dip, then bounded golden-section/parabolic refinement polishes it.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0 < lo < hi):
        raise ConfigurationError(f"bracket must satisfy 0 < lo < hi, got {bracket}")
    w0 = config.trap_frequency

    def objective(duration: float) -> float:
        value = spectrum_numeric(_profile_for_duration(family_or_shape, duration), w0).value
        return abs(value) ** 2

    grid = np.linspace(lo, hi, _SCAN_POINTS)
    values = [objective(t) for t in grid]
    best = int(np.argmin(values))
    lo_ref = grid[max(best - 1, 0)]
    hi_ref = grid[min(best + 1, _SCAN_POINTS - 1)]
    result = minimize_scalar(
        objective,
        bounds=(lo_ref, hi_ref),
        method="bounded",
        options={"xatol": 1e-10 * 2 * np.pi / w0, "maxiter": 400},
    )
    if result.fun > _OBJECTIVE_FLOOR:
        raise NoZeroInBracket(
            f"best |W(omega0)|^2 in bracket is {result.fun:.3e}, above {_OBJECTIVE_FLOOR:.1e}"
        )
    return float(result.x)
