"""Simulation state for both formulations."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import electromagnetics as em
from .grid import GridSpec
from .params import Formulation


class StateInvalidError(RuntimeError):
    """A state field is non-finite or violates positivity.

    ``quantity`` names the first offending field ("A", "H", "v", "rho", "P").
    """

    def __init__(self, quantity: str, message: str):
        super().__init__(message)
        self.quantity = quantity


@dataclass
class SimState:
    """Fluid + magnetic state on one grid at one time.

    Modified formulation: ``a`` holds the periodic vector potential and
    ``bg`` the affine background A0 = M x.  Traditional formulation: ``h``
    holds the periodic magnetic field and ``h0`` a uniform background
    vector.  rho and P must be strictly positive everywhere.
    """

    grid: GridSpec
    formulation: Formulation
    v: np.ndarray
    rho: np.ndarray
    p: np.ndarray
    t: float = 0.0
    a: np.ndarray | None = None
    bg: em.BackgroundPotential | None = None
    h: np.ndarray | None = None
    h0: np.ndarray | None = None

    def __post_init__(self):
        g = self.grid
        if self.formulation is Formulation.MODIFIED:
            if self.a is None:
                raise ValueError("modified state needs the periodic potential a")
            if self.bg is None:
                self.bg = em.BackgroundPotential.zero()
            if self.a.shape != g.vshape:
                raise ValueError(f"a: expected shape {g.vshape}, got {self.a.shape}")
        else:
            if self.h is None:
                raise ValueError("traditional state needs the periodic field h")
            if self.h0 is None:
                self.h0 = np.zeros(3)
            self.h0 = np.asarray(self.h0, dtype=float).reshape(3)
            if self.h.shape != g.vshape:
                raise ValueError(f"h: expected shape {g.vshape}, got {self.h.shape}")
        if self.v.shape != g.vshape:
            raise ValueError(f"v: expected shape {g.vshape}, got {self.v.shape}")
        for name, arr in (("rho", self.rho), ("p", self.p)):
            if arr.shape != g.shape:
                raise ValueError(f"{name}: expected shape {g.shape}, got {arr.shape}")

    @property
    def mag(self) -> np.ndarray:
        """The evolved magnetic degree of freedom (a or h)."""
        return self.a if self.formulation is Formulation.MODIFIED else self.h

    def h_total(self, order: int = 2) -> np.ndarray:
        """Total magnetic field including the uniform background."""
        if self.formulation is Formulation.MODIFIED:
            return em.h_from_a(self.a, self.bg, self.grid, order)
        return self.h + self.h0[:, None, None, None]

    def with_fields(self, mag: np.ndarray, v: np.ndarray, rho: np.ndarray,
                    p: np.ndarray, t: float) -> "SimState":
        if self.formulation is Formulation.MODIFIED:
            return replace(self, a=mag, v=v, rho=rho, p=p, t=t)
        return replace(self, h=mag, v=v, rho=rho, p=p, t=t)

    def copy(self) -> "SimState":
        kw = dict(v=self.v.copy(), rho=self.rho.copy(), p=self.p.copy())
        if self.formulation is Formulation.MODIFIED:
            kw["a"] = self.a.copy()
        else:
            kw["h"] = self.h.copy()
        return replace(self, **kw)


def validate_state(state: SimState) -> None:
    """Raise StateInvalidError naming the first offending quantity."""
    mag_name = "A" if state.formulation is Formulation.MODIFIED else "H"
    checks = (
        (mag_name, state.mag),
        ("v", state.v),
        ("rho", state.rho),
        ("P", state.p),
    )
    for name, arr in checks:
        if not np.isfinite(arr).all():
            raise StateInvalidError(name, f"{name} contains non-finite values")
    if not (state.rho > 0.0).all():
        raise StateInvalidError("rho", "rho must be strictly positive everywhere")
    if not (state.p > 0.0).all():
        raise StateInvalidError("P", "P must be strictly positive everywhere")
