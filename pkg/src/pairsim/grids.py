"""Phase-space grid and the spectral machinery of the transport equations.

Two independent transform directions are used: the momentum axis p is
transformed to its conjugate variable y (where the nonlocal force
operator becomes a local multiplier), and the x axis has its own
transform for spatial derivatives.  Both directions are periodic.

Transform convention (round-trip unitary, forward unnormalized):

    w~(y_k) = sum_j w(p_j) exp(-i p_j y_k),
    w(p_j)  = (1/N) sum_k w~(y_k) exp(+i p_j y_k),

so that d/dp maps to multiplication by (i y) on the transform side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft

from .errors import ContractViolation, ValidationError
from .fields import ChirpedGaussianPulse, gaussian_antiderivative, temporal_profile


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Uniform periodic grid on [-lx, lx) x [-lp, lp)."""

    nx: int
    np_: int
    lx: float
    lp: float

    def __post_init__(self):
        for name, n in (("nx", self.nx), ("np", self.np_)):
            if not isinstance(n, int) or n < 8 or not _is_power_of_two(n):
                raise ValidationError(f"{name} must be a power of two >= 8, got {n}")
        if self.lx <= 0 or self.lp <= 0:
            raise ValidationError("grid extents must be positive")

    @property
    def dx(self) -> float:
        return 2.0 * self.lx / self.nx

    @property
    def dp(self) -> float:
        return 2.0 * self.lp / self.np_

    @cached_property
    def x(self) -> np.ndarray:
        return -self.lx + self.dx * np.arange(self.nx)

    @cached_property
    def p(self) -> np.ndarray:
        return -self.lp + self.dp * np.arange(self.np_)

    @cached_property
    def y(self) -> np.ndarray:
        """Conjugate nodes of p, in FFT order; spacing pi/lp, range [-pi/dp, pi/dp)."""
        return 2.0 * np.pi * sfft.fftfreq(self.np_, d=self.dp)

    @cached_property
    def y_half(self) -> np.ndarray:
        """Non-negative conjugate nodes matching rfft output."""
        return 2.0 * np.pi * sfft.rfftfreq(self.np_, d=self.dp)

    @cached_property
    def kx(self) -> np.ndarray:
        """Wavenumbers of the x-axis transform, in FFT order."""
        return 2.0 * np.pi * sfft.fftfreq(self.nx, d=self.dx)


def make_grid(nx: int, np_: int, lx: float, lp: float) -> PhaseSpaceGrid:
    return PhaseSpaceGrid(nx, np_, lx, lp)


@dataclass
class GridField:
    """2D field with axis labels; shape nx x np along (axes[0], axes[1])."""

    values: np.ndarray
    axes: tuple[str, str] = ("x", "p")

    def require_axes(self, axes: tuple[str, str]):
        if self.axes != axes:
            raise ContractViolation(f"expected axes {axes}, got {self.axes}")


def transform_p_to_y(grid: PhaseSpaceGrid, f: GridField) -> GridField:
    """DFT along the momentum axis, per x-row."""
    f.require_axes(("x", "p"))
    phase = np.exp(-1j * grid.p[0] * grid.y)
    return GridField(sfft.fft(f.values, axis=1) * phase, ("x", "y"))


def inverse_transform_y_to_p(grid: PhaseSpaceGrid, f: GridField) -> GridField:
    f.require_axes(("x", "y"))
    phase = np.exp(1j * grid.p[0] * grid.y)
    return GridField(sfft.ifft(f.values * phase, axis=1), ("x", "p"))


def spatial_derivative(grid: PhaseSpaceGrid, f: GridField) -> GridField:
    """Spectral d/dx; exact for band-limited periodic data."""
    f.require_axes(("x", "p"))
    fk = sfft.rfft(f.values, axis=0)
    k = 2.0 * np.pi * sfft.rfftfreq(grid.nx, d=grid.dx)
    out = sfft.irfft(1j * k[:, None] * fk, n=grid.nx, axis=0)
    return GridField(out, ("x", "p"))


def ddx(grid: PhaseSpaceGrid, values: np.ndarray, axis: int = -2) -> np.ndarray:
    """Spectral x-derivative on a bare array (axis = x axis)."""
    k = 2.0 * np.pi * sfft.rfftfreq(grid.nx, d=grid.dx)
    if axis in (-2, values.ndim - 2):
        # contiguous last-axis transforms are measurably faster than
        # strided ones at production sizes; transpose, transform, undo
        vt = np.ascontiguousarray(np.swapaxes(values, -1, -2))
        fk = sfft.rfft(vt, axis=-1)
        fk *= 1j * k
        out = sfft.irfft(fk, n=grid.nx, axis=-1)
        return np.swapaxes(out, -1, -2)
    fk = sfft.rfft(values, axis=axis)
    shape = [1] * fk.ndim
    shape[axis] = fk.shape[axis]
    return sfft.irfft(1j * k.reshape(shape) * fk, n=grid.nx, axis=axis)


def antiderivative_difference_table(pulse: ChirpedGaussianPulse, grid: PhaseSpaceGrid,
                                    y: np.ndarray | None = None) -> np.ndarray:
    """Phi(x + y/2) - Phi(x - y/2) on the (x, y) lattice.

    The time dependence of the force multiplier factorizes out, so this
    table is computed once per run and only the scalar g(t) is updated.
    """
    if y is None:
        y = grid.y
    xp = grid.x[:, None] + 0.5 * y[None, :]
    xm = grid.x[:, None] - 0.5 * y[None, :]
    return gaussian_antiderivative(pulse, xp) - gaussian_antiderivative(pulse, xm)


def force_multiplier_table(pulse: ChirpedGaussianPulse, grid: PhaseSpaceGrid,
                           t: float) -> np.ndarray:
    """M(x, y, t) = i * integral of eE(u, t) du over [x - y/2, x + y/2].

    Complex array over (x_i, y_k) with y in FFT order.  Applying the
    transport-equation force operator to w(x, p) equals
    inverse_transform_y_to_p(M * transform_p_to_y(w)).
    """
    g = float(temporal_profile(pulse, t))
    table = antiderivative_difference_table(pulse, grid).copy()
    # the most-negative (Nyquist) y node has no positive partner; an odd
    # multiplier must vanish there for the operator to map real to real
    table[:, grid.y == grid.y.min()] = 0.0
    return 1j * g * table


def apply_force_operator(grid: PhaseSpaceGrid, multiplier: np.ndarray,
                         values: np.ndarray) -> np.ndarray:
    """Apply the y-diagonal force multiplier to real data on (..., x, p).

    The p-offset phase factors of the transform convention cancel for a
    y-diagonal multiplier, so plain FFTs suffice.
    """
    wt = sfft.fft(values, axis=-1)
    out = sfft.ifft(multiplier * wt, axis=-1)
    return out.real


def imaginary_residue(grid: PhaseSpaceGrid, multiplier: np.ndarray,
                      values: np.ndarray) -> float:
    """Max-norm of the imaginary part left by the force application."""
    wt = sfft.fft(values, axis=-1)
    out = sfft.ifft(multiplier * wt, axis=-1)
    return float(np.max(np.abs(out.imag)))
