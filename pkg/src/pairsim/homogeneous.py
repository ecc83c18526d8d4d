"""Homogeneous-limit solver: per-mode ODEs along field characteristics.

In the spatially uniform limit the transport operator collapses to
d/dt + eE(t) d/dp, which is solved along characteristics of constant
canonical momentum q.  With the kinetic momentum p(t) = q - eA(t),
A(t) = -int eE dt', the three evolving components obey

    ds/dt = 2 p(t) pc,
    dv/dt = -2 m pc,
    dpc/dt = -2 p(t) s + 2 m v,

from vacuum initial data s = -2m/omega(p), v = -2p/omega(p), pc = 0.
The motion conserves s^2 + v^2 + pc^2 (= 4 from vacuum data).

The particle number per mode at the final time is read off in kinetic
momentum, n = [m s^v + p v^v]/omega(p) with the vacuum values subtracted
at p(tf); at asymptotic times the field is negligible so kinetic and
asymptotic momentum coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationDivergedError, ValidationError
from .solver import M_ELECTRON, _GL_NODES, _GL_WEIGHTS, one_particle_energy


@dataclass
class ModeState:
    """Reduced state of one canonical-momentum characteristic."""

    q: float
    s: float
    v: float
    pcomp: float
    v0: float
    time: float


class VectorPotentialTable:
    """Cumulative A(t) = -int_{t0}^{t} eE dt' on a uniform fine grid.

    Each cell is integrated with 4-point Gauss-Legendre; off-node times
    add a partial-cell Gauss-Legendre correction.
    """

    def __init__(self, field, t0: float, tf: float, n_cells: int = 8192):
        self.field = field
        self.t0 = float(t0)
        self.dt = (float(tf) - float(t0)) / n_cells
        edges = self.t0 + self.dt * np.arange(n_cells + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * self.dt
        nodes = mids[:, None] + half * _GL_NODES[None, :]
        cell = half * np.sum(_GL_WEIGHTS[None, :] * field(nodes), axis=1)
        self.cum = np.concatenate([[0.0], np.cumsum(cell)])
        self.n_cells = n_cells

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(((t - self.t0) / self.dt).astype(int), 0, self.n_cells)
        t_node = self.t0 + idx * self.dt
        base = self.cum[idx]
        # partial cell from the nearest lower node
        mid = 0.5 * (t_node + t)
        half = 0.5 * (t - t_node)
        tail = np.sum(_GL_WEIGHTS * self.field(mid[..., None] + half[..., None] * _GL_NODES),
                      axis=-1) * half
        return -(base + tail)


def vector_potential(field, t, t0: float, tf: float | None = None) -> float:
    """A(t) = -int_{t0}^{t} eE(t') dt' by high-order composite quadrature."""
    if np.any(np.asarray(t) < t0):
        raise ValidationError("vector_potential requires t >= t0")
    tf = float(np.max(t)) if tf is None else tf
    table = VectorPotentialTable(field, t0, max(tf, float(np.max(t)) + 1e-12))
    out = table(t)
    return float(out) if np.isscalar(t) or np.asarray(t).ndim == 0 else out


def evolve_modes(field, q, t0: float, tf: float, dt: float,
                 a_table: VectorPotentialTable | None = None):
    """Integrate the characteristics ODE for an array of canonical momenta.

    Returns (n, p_final): particle number per mode and the kinetic
    momentum at tf.  RK4 with fixed step; vectorized over modes.
    """
    if dt <= 0:
        raise ValidationError(f"dt must be positive, got {dt}")
    q = np.atleast_1d(np.asarray(q, dtype=float))
    a = a_table or VectorPotentialTable(field, t0, tf)

    n_steps = max(1, int(np.ceil((tf - t0) / dt - 1e-12)))
    dt = (tf - t0) / n_steps
    # kinetic momentum at step nodes and midpoints
    t_nodes = t0 + dt * np.arange(n_steps + 1)
    p_nodes = q[None, :] - a(t_nodes)[:, None]
    p_mids = q[None, :] - a(t_nodes[:-1] + 0.5 * dt)[:, None]

    om0 = one_particle_energy(p_nodes[0])
    s = -2.0 * M_ELECTRON / om0
    v = -2.0 * p_nodes[0] / om0
    pc = np.zeros_like(s)

    def f(s, v, pc, p):
        return (2.0 * p * pc,
                -2.0 * M_ELECTRON * pc,
                -2.0 * p * s + 2.0 * M_ELECTRON * v)

    for i in range(n_steps):
        p0, pm, p1 = p_nodes[i], p_mids[i], p_nodes[i + 1]
        k1 = f(s, v, pc, p0)
        k2 = f(s + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1], pc + 0.5 * dt * k1[2], pm)
        k3 = f(s + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1], pc + 0.5 * dt * k2[2], pm)
        k4 = f(s + dt * k3[0], v + dt * k3[1], pc + dt * k3[2], p1)
        s = s + (dt / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
        v = v + (dt / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
        pc = pc + (dt / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])

    if not (np.all(np.isfinite(s)) and np.all(np.isfinite(v)) and np.all(np.isfinite(pc))):
        raise IntegrationDivergedError(tf)

    p_f = p_nodes[-1]
    om_f = one_particle_energy(p_f)
    s_v = s + 2.0 * M_ELECTRON / om_f
    v_v = v + 2.0 * p_f / om_f
    n = (M_ELECTRON * s_v + p_f * v_v) / om_f
    return n, p_f


def evolve_mode(field, q: float, t0: float, tf: float, dt: float) -> float:
    """Particle number n(q) of a single canonical-momentum mode at tf."""
    n, _ = evolve_modes(field, np.array([q]), t0, tf, dt)
    return float(n[0])


def mode_norm_drift(field, q, t0: float, tf: float, dt: float) -> float:
    """Relative drift of the conserved s^2 + v^2 + pc^2 (diagnostic)."""
    q = np.atleast_1d(np.asarray(q, dtype=float))
    a = VectorPotentialTable(field, t0, tf)
    n_steps = max(1, int(np.ceil((tf - t0) / dt)))
    dt = (tf - t0) / n_steps
    t_nodes = t0 + dt * np.arange(n_steps + 1)
    p_nodes = q[None, :] - a(t_nodes)[:, None]
    p_mids = q[None, :] - a(t_nodes[:-1] + 0.5 * dt)[:, None]
    om0 = one_particle_energy(p_nodes[0])
    s, v, pc = -2.0 / om0, -2.0 * p_nodes[0] / om0, np.zeros_like(om0)

    def f(s, v, pc, p):
        return 2.0 * p * pc, -2.0 * pc, -2.0 * p * s + 2.0 * v

    for i in range(n_steps):
        p0, pm, p1 = p_nodes[i], p_mids[i], p_nodes[i + 1]
        k1 = f(s, v, pc, p0)
        k2 = f(s + 0.5 * dt * k1[0], v + 0.5 * dt * k1[1], pc + 0.5 * dt * k1[2], pm)
        k3 = f(s + 0.5 * dt * k2[0], v + 0.5 * dt * k2[1], pc + 0.5 * dt * k2[2], pm)
        k4 = f(s + dt * k3[0], v + dt * k3[1], pc + dt * k3[2], p1)
        s = s + (dt / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v = v + (dt / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        pc = pc + (dt / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
    norm = s * s + v * v + pc * pc
    return float(np.max(np.abs(norm - 4.0)) / 4.0)
