"""Periodic Poisson solve and Helmholtz projection.

The projection enforces the solenoidal gauge div A = 0: given V, solve
lap(phi) = div(V) and subtract grad(phi).  The discrete Laplacian here is
*exactly* div(grad(.)) built from the same first-derivative stencils as
every other operator, so "div of the projected field is small" is a
statement about the one discrete divergence this package has, not about
some second discretization.

The solve is plain conjugate gradients, matrix free.  On a periodic box
the operator is singular (constants, and on even grids the per-axis
Nyquist modes), so the right-hand side must have zero mean and the mean
of the residual is re-projected every iteration to keep roundoff from
feeding the null space.
"""

from __future__ import annotations

import numpy as np

from . import operators as ops
from .grid import GridSpec


class SolverFailure(RuntimeError):
    """Poisson solve did not reach tolerance within the iteration budget."""

    def __init__(self, message: str, residual: float, tol: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.tol = tol
        self.iterations = iterations


def poisson_solve(
    rhs: np.ndarray,
    grid: GridSpec,
    order: int = 2,
    tol: float = 1e-10,
    max_iter: int | None = None,
) -> np.ndarray:
    """Solve lap(u) = rhs on the periodic box; returns the zero-mean u.

    The rhs must have zero mean to ~1e-12 relative (periodic solvability);
    callers subtract the mean first.  Convergence criterion is
    ||lap(u) - rhs||_2 <= tol * ||rhs||_2 in the plain vector norm.
    """
    if rhs.shape != grid.shape:
        raise ValueError(f"rhs: expected shape {grid.shape}, got {rhs.shape}")
    if max_iter is None:
        max_iter = 50 * max(grid.nx, grid.ny, grid.nz)

    rms = float(np.sqrt(np.vdot(rhs, rhs).real / rhs.size))
    mean = float(rhs.mean())
    if rms == 0.0:
        return np.zeros(grid.shape)
    if abs(mean) > 1e-12 * rms:
        raise ValueError(
            f"poisson rhs must have zero mean (got mean {mean:.3e} vs rms {rms:.3e})"
        )

    # CG on the SPD operator A = -div(grad(.)), solving A u = -(rhs - mean).
    def apply_a(p):
        return -ops.div(ops.grad(p, grid, order), grid, order)

    b = mean - rhs
    b -= b.mean()
    target = tol * float(np.sqrt(np.vdot(b, b).real))

    x = np.zeros(grid.shape)
    r = b.copy()
    p = r.copy()
    rs = float(np.vdot(r, r).real)
    res = np.sqrt(rs)
    it = 0
    while it < max_iter:
        if res <= target:
            # Recurrence says converged; confirm with the true residual.
            r_true = b - apply_a(x)
            r_true -= r_true.mean()
            res_true = float(np.sqrt(np.vdot(r_true, r_true).real))
            if res_true <= target:
                return x - x.mean()
            r = r_true
            p = r.copy()
            rs = float(np.vdot(r, r).real)
            res = np.sqrt(rs)
        ap = apply_a(p)
        alpha = rs / float(np.vdot(p, ap).real)
        x += alpha * p
        r -= alpha * ap
        r -= r.mean()
        rs_new = float(np.vdot(r, r).real)
        p = r + (rs_new / rs) * p
        rs = rs_new
        res = np.sqrt(rs)
        it += 1

    if res <= target:
        r_true = b - apply_a(x)
        res_true = float(np.sqrt(np.vdot(r_true, r_true).real))
        if res_true <= target:
            return x - x.mean()
        res = res_true
    raise SolverFailure(
        f"poisson solve stalled at residual {res:.3e} (target {target:.3e}) "
        f"after {it} iterations",
        residual=res,
        tol=tol,
        iterations=it,
    )


def helmholtz_project(
    v: np.ndarray,
    grid: GridSpec,
    order: int = 2,
    tol: float = 1e-10,
) -> tuple[np.ndarray, np.ndarray]:
    """Remove the gradient part of V: returns (V - grad(phi), phi).

    phi solves lap(phi) = div(V).  If div(V) is already at roundoff level
    relative to V the input is returned unchanged with phi = 0, so
    projecting a solenoidal field (or zeros) is an exact no-op.
    """
    if v.shape != grid.vshape:
        raise ValueError(f"field: expected shape {grid.vshape}, got {v.shape}")
    d = ops.div(v, grid, order)
    d -= d.mean()
    d_l2 = float(np.sqrt(np.vdot(d, d).real))
    floor = 1e-14 * float(np.sqrt(np.vdot(v, v).real)) / grid.min_spacing
    if d_l2 <= floor:
        return v, np.zeros(grid.shape)
    phi = poisson_solve(d, grid, order=order, tol=tol)
    return v - ops.grad(phi, grid, order), phi
