"""Chirped, Gaussian-enveloped electric field and derived quantities.

Units: m = 1, e = 1, E_cr = m^2/e = 1.  All field values are carried
pre-multiplied by the charge, i.e. a "field value" here is eE in units
of m^2.  Positions and times are in m^-1, frequencies in m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import ValidationError

TWO_PI = 2.0 * math.pi

_SQRT2 = math.sqrt(2.0)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)


@dataclass(frozen=True)
class ChirpedGaussianPulse:
    """eE(x,t) = eps * exp(-x^2/2 lam^2) * exp(-t^2/2 tau^2) * cos(b t^2 + omega t + phi).

    ``alpha`` is the dimensionless chirp ratio, b = alpha * omega / tau;
    it is stored redundantly for reporting and sweeps.
    """

    eps: float
    lam: float
    tau: float
    omega: float
    b: float
    alpha: float
    phi: float

    def __post_init__(self):
        if self.eps < 0:
            # eps = 0 is admitted for null-field runs
            raise ValidationError(f"eps must be non-negative, got {self.eps}")
        if self.lam <= 0:
            raise ValidationError(f"lam must be positive, got {self.lam}")
        if self.tau <= 0:
            raise ValidationError(f"tau must be positive, got {self.tau}")
        if self.omega < 0:
            raise ValidationError(f"omega must be non-negative, got {self.omega}")
        if self.b < 0 or self.alpha < 0:
            raise ValidationError("chirp must be non-negative")
        if not 0.0 <= self.phi < TWO_PI:
            raise ValidationError(f"phi must lie in [0, 2pi), got {self.phi}")
        if self.omega > 0:
            if abs(self.b - self.alpha * self.omega / self.tau) >= 1e-12:
                raise ValidationError("b and alpha are inconsistent")
        elif self.b != 0.0:
            raise ValidationError("omega = 0 requires b = 0")


def make_pulse(eps, lam, tau, omega, *, alpha=None, b=None, phi=0.0) -> ChirpedGaussianPulse:
    """Build a pulse from either the chirp ``b`` or the chirp ratio ``alpha``."""
    if (alpha is None) == (b is None):
        raise ValidationError("give exactly one of alpha or b")
    if alpha is not None:
        if alpha < 0:
            raise ValidationError(f"alpha must be non-negative, got {alpha}")
        b = alpha * omega / tau
    else:
        if b < 0:
            raise ValidationError(f"b must be non-negative, got {b}")
        alpha = b * tau / omega if omega > 0 else 0.0
    phi = float(phi) % TWO_PI
    return ChirpedGaussianPulse(float(eps), float(lam), float(tau), float(omega),
                                float(b), float(alpha), float(phi))


def spatial_envelope(pulse: ChirpedGaussianPulse, x):
    """eps * exp(-x^2 / 2 lam^2)."""
    x = np.asarray(x, dtype=float)
    return pulse.eps * np.exp(-x * x / (2.0 * pulse.lam**2))


def temporal_profile(pulse: ChirpedGaussianPulse, t):
    """g(t) = exp(-t^2 / 2 tau^2) * cos(b t^2 + omega t + phi)."""
    t = np.asarray(t, dtype=float)
    return np.exp(-t * t / (2.0 * pulse.tau**2)) * np.cos(pulse.b * t * t + pulse.omega * t + pulse.phi)


def field_value(pulse: ChirpedGaussianPulse, x, t):
    """eE(x, t) in units of m^2."""
    return spatial_envelope(pulse, x) * temporal_profile(pulse, t)


def gaussian_antiderivative(pulse: ChirpedGaussianPulse, x):
    """Phi(x) with Phi'(x) = eps * exp(-x^2/2 lam^2)."""
    x = np.asarray(x, dtype=float)
    return pulse.eps * pulse.lam * _SQRT_HALF_PI * erf(x / (pulse.lam * _SQRT2))


def spatial_antiderivative(pulse: ChirpedGaussianPulse, x1, x2, t):
    """Line integral of eE(u, t) du from x1 to x2 (units m).

    The field factorizes, so the integral is g(t) * [Phi(x2) - Phi(x1)]
    with Phi the Gaussian antiderivative; antisymmetric under swapping
    x1 and x2.
    """
    return temporal_profile(pulse, t) * (
        gaussian_antiderivative(pulse, x2) - gaussian_antiderivative(pulse, x1)
    )


def effective_frequency(pulse: ChirpedGaussianPulse, t):
    """omega + b t.  May be negative for t < -omega/b."""
    return pulse.omega + pulse.b * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class HomogeneousSlice:
    """Time-only field descriptor eE(t) = eps_eff * exp(-t^2/2 tau^2) * cos(b t^2 + omega t + phi).

    Shares tau, omega, b, phi with the parent pulse; eps_eff is the local
    spatial envelope value (effective field strength).
    """

    eps_eff: float
    tau: float
    omega: float
    b: float
    phi: float

    def __post_init__(self):
        if self.eps_eff < 0:
            raise ValidationError(f"eps_eff must be non-negative, got {self.eps_eff}")

    def field(self, t):
        """eE(t) in units of m^2."""
        t = np.asarray(t, dtype=float)
        return self.eps_eff * np.exp(-t * t / (2.0 * self.tau**2)) * np.cos(
            self.b * t * t + self.omega * t + self.phi)

    __call__ = field


def homogeneous_slice(pulse: ChirpedGaussianPulse, eps_eff: float) -> HomogeneousSlice:
    """Field at a fixed effective strength (time dependence of the parent pulse)."""
    return HomogeneousSlice(float(eps_eff), pulse.tau, pulse.omega, pulse.b, pulse.phi)
