"""Closed-form single-pulse pair spectrum used as an independent oracle.

For the Sauter pulse eE(t) = eE0 sech^2(t/tau_s) the mode equation is
exactly solvable; the pair probability per mode is

    |beta|^2 = [cosh(2 pi L) - cosh(pi (th_out - th_in))]
               / (2 sinh(pi th_in) sinh(pi th_out)),

with L = eE0 tau_s^2 and th = tau_s * omega evaluated at the incoming
and outgoing asymptotic kinetic momenta.  Verified against direct
integration of the Dirac mode functions.

The phase-space density of the transport formalism assigns a fully
flipped mode the value 4 (both nonvanishing components reverse sign and
the subtracted energy 4 omega is divided by omega), so the matching
particle number is n = 4 |beta|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .solver import M_ELECTRON


@dataclass(frozen=True)
class SauterPulse:
    """eE(t) = e_e0 * sech^2(t / tau_s); time-only field descriptor."""

    e0: float
    tau_s: float

    def __post_init__(self):
        if self.e0 <= 0 or self.tau_s <= 0:
            raise ValidationError("Sauter pulse needs positive e0 and tau_s")

    def field(self, t):
        t = np.asarray(t, dtype=float)
        return self.e0 / np.cosh(t / self.tau_s) ** 2

    __call__ = field


def sauter_pair_spectrum(pulse: SauterPulse, p_in):
    """n = 4 |beta|^2 for the Sauter pulse, against incoming kinetic momentum.

    The total momentum kick of the pulse is 2 eE0 tau_s, so a mode with
    incoming momentum p_in leaves with p_out = p_in + 2 eE0 tau_s; the
    closed form depends on the two asymptotic energies.
    """
    p_in = np.asarray(p_in, dtype=float)
    kick = pulse.e0 * pulse.tau_s
    lam = pulse.e0 * pulse.tau_s**2
    th_in = pulse.tau_s * np.sqrt(M_ELECTRON**2 + p_in**2)
    th_out = pulse.tau_s * np.sqrt(M_ELECTRON**2 + (p_in + 2.0 * kick) ** 2)
    num = np.cosh(2.0 * np.pi * lam) - np.cosh(np.pi * (th_out - th_in))
    den = 2.0 * np.sinh(np.pi * th_in) * np.sinh(np.pi * th_out)
    return 4.0 * num / den
