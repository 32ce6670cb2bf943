"""Integration contours and the finite-difference operator posed on them."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import ContourTooCoarse, PoleOnContour, SchemaError
from ..potential import Hamiltonian

CONTOUR_KINDS = ("real", "shifted")
RESERVED_KINDS = ("wedge",)
MIN_POINTS = 16
CONTOUR_POLE_TOL = 1e-9


@dataclass(frozen=True)
class Contour:
    """Horizontal line z_k = x_min + k*h + i*imag_offset, k = 0..n_points-1.

    The end samples carry the Dirichlet condition and are never evaluated by
    the finite-difference operator.
    """

    x_min: float
    x_max: float
    n_points: int = 4000
    imag_offset: float = 0.0
    kind: str = "real"

    def __post_init__(self):
        if self.kind in RESERVED_KINDS:
            raise SchemaError(f"contour kind {self.kind!r} is reserved and not implemented")
        if self.kind not in CONTOUR_KINDS:
            raise SchemaError(f"unknown contour kind {self.kind!r}")
        if not self.x_min < self.x_max:
            raise SchemaError("contour needs x_min < x_max")
        if self.kind == "real" and self.imag_offset != 0:
            raise SchemaError("a real contour has no imaginary offset")
        if int(self.n_points) != self.n_points:
            raise SchemaError("n_points must be an integer")
        object.__setattr__(self, "n_points", int(self.n_points))
        if self.n_points < MIN_POINTS:
            raise ContourTooCoarse(f"need at least {MIN_POINTS} points, got {self.n_points}")

    @classmethod
    def real(cls, x_min, x_max, n_points=4000):
        return cls(float(x_min), float(x_max), n_points, 0.0, "real")

    @classmethod
    def shifted(cls, x_min, x_max, imag_offset, n_points=4000):
        return cls(float(x_min), float(x_max), n_points, float(imag_offset), "shifted")

    @classmethod
    def parse(cls, text: str) -> "Contour":
        """``real:<xmin>:<xmax>:<N>`` or ``shifted:<xmin>:<xmax>:<c>:<N>``."""
        parts = text.split(":")
        try:
            if parts[0] == "real" and len(parts) == 4:
                return cls.real(float(parts[1]), float(parts[2]), int(parts[3]))
            if parts[0] == "shifted" and len(parts) == 5:
                return cls.shifted(float(parts[1]), float(parts[2]), float(parts[3]), int(parts[4]))
        except ValueError:
            pass
        raise SchemaError(f"cannot parse contour {text!r}")

    def with_points(self, n_points: int) -> "Contour":
        return replace(self, n_points=n_points)

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        """Real parameter of every sample, end points included."""
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.imag_offset

    def describe(self) -> str:
        if self.kind == "real":
            return f"real:{self.x_min:g}:{self.x_max:g}:{self.n_points}"
        return f"shifted:{self.x_min:g}:{self.x_max:g}:{self.imag_offset:g}:{self.n_points}"


@dataclass(frozen=True, eq=False)
class TridiagOperator:
    """-(hbar**2/2m) D2 + V on the interior samples of a contour (Dirichlet ends)."""

    diag: np.ndarray
    off: complex
    contour: Contour
    mass: float

    def __len__(self):
        return self.diag.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.diag.imag == 0)) and complex(self.off).imag == 0

    def __neg__(self):
        return TridiagOperator(-self.diag, -self.off, self.contour, -self.mass)

    def dense(self) -> np.ndarray:
        n = len(self)
        a = np.diag(self.diag.astype(complex))
        idx = np.arange(n - 1)
        a[idx, idx + 1] = self.off
        a[idx + 1, idx] = self.off
        return a

    def matvec(self, v):
        v = np.asarray(v)
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out


def potential_on(h: Hamiltonian, z, tol=CONTOUR_POLE_TOL):
    """Checked potential values on contour samples; PoleOnContour near a pole."""
    z = np.asarray(z, dtype=complex)
    dist = h.potential.pole_distance(z)
    if dist.size and np.min(dist) <= tol:
        bad = z[np.argmin(dist)]
        raise PoleOnContour(f"contour sample {bad} is within {tol:g} of a potential pole")
    return h.potential.evaluate(z, pole_tol=0.0)


def discretize(h: Hamiltonian, c: Contour) -> TridiagOperator:
    """Three-point finite-difference operator on the interior of ``c``.

    diag_k = hbar**2/(m h**2) + V(z_k) and off = -hbar**2/(2 m h**2).
    """
    if c.n_points < MIN_POINTS:
        raise ContourTooCoarse(f"need at least {MIN_POINTS} points")
    step = c.step
    v = potential_on(h, c.z[1:-1])
    kin = h.hbar**2 / (h.mass * step * step)
    diag = kin + v
    off = complex(-h.hbar**2 / (2.0 * h.mass * step * step))
    return TridiagOperator(diag.astype(complex), off, c, h.mass)
