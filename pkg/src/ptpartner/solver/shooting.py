"""Shooting method: RK4 from both ends and Wronskian matching in the middle."""

from __future__ import annotations

import numpy as np

from ..errors import NoRootFromSeed, ShootingOverflow, SpectrumIncomplete
from ..potential import Hamiltonian
from . import kernels
from .contour import CONTOUR_POLE_TOL, Contour, potential_on


class Shooter:
    """Precomputed potential samples for repeated Wronskian evaluations.

    The two end samples carry psi = 0, so the potential there is never used and
    may sit on a pole (e.g. sec**2 walls at +-pi/2).
    """

    def __init__(self, h: Hamiltonian, c: Contour):
        self.hamiltonian = h
        self.contour = c
        z = c.z
        zm = 0.5 * (z[:-1] + z[1:])
        vg = np.zeros(c.n_points, dtype=complex)
        vg[1:-1] = potential_on(h, z[1:-1])
        for end in (0, c.n_points - 1):
            if h.potential.pole_distance(z[[end]])[0] > CONTOUR_POLE_TOL:
                vg[end] = h.potential(z[[end]])[0]
        self.vg = vg
        self.vm = np.ascontiguousarray(potential_on(h, zm), dtype=complex)
        self.k = 2.0 * h.mass / h.hbar**2
        self.imid = (c.n_points - 1) // 2

    def __call__(self, E) -> complex:
        w = kernels.wronskian(self.vg, self.vm, self.k, complex(E), self.contour.step, self.imid)
        if not np.isfinite(w):
            raise ShootingOverflow(f"integration overflowed at E = {E}")
        return complex(w)


def shoot_residual(h: Hamiltonian, c: Contour, E) -> complex:
    """Normalized Wronskian mismatch W(E); zero exactly at eigenvalues."""
    return Shooter(h, c)(E)


def _secant(fun, seed, max_iter=60, rtol=1e-10):
    e0 = complex(seed)
    e1 = e0 + 1e-4 * max(1.0, abs(e0))
    w0, w1 = fun(e0), fun(e1)
    for _ in range(max_iter):
        denom = w1 - w0
        if denom == 0:
            raise NoRootFromSeed("secant slope vanished", seed=seed)
        e2 = e1 - w1 * (e1 - e0) / denom
        if not np.isfinite(e2) or abs(e2 - complex(seed)) > 1e6 * max(1.0, abs(seed)):
            raise NoRootFromSeed("secant iteration diverged", seed=seed)
        e0, w0 = e1, w1
        e1 = e2
        w1 = fun(e1)
        if abs(e1 - e0) <= rtol * max(1.0, abs(e1)):
            return e1
    raise NoRootFromSeed(f"no convergence in {max_iter} secant steps", seed=seed)


def shoot_find(h: Hamiltonian, c: Contour, seeds, count: int, rtol=1e-10, merge_tol=1e-8):
    """Refine eigenvalue seeds by complex secant iteration on W(E).

    Roots already found are divided out of W before later searches. Seeds that
    fail are recorded on the returned spectrum's ``failures``; fewer than
    ``count`` distinct roots raises SpectrumIncomplete carrying the partial
    spectrum.
    """
    from .spectrum import Spectrum

    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    shoot = Shooter(h, c)
    found: list[complex] = []
    failures = []
    for seed in seeds:
        if len(found) >= count:
            break

        def deflated(E):
            w = shoot(E)
            for r in found:
                w /= E - r
            return w

        try:
            root = _secant(deflated, seed, rtol=rtol)
        except (NoRootFromSeed, ShootingOverflow, ZeroDivisionError) as exc:
            failures.append((complex(seed), str(exc)))
            continue
        if any(abs(root - r) <= merge_tol * max(1.0, abs(r)) for r in found):
            continue
        found.append(root)
    residuals = [abs(shoot(r)) for r in found]
    spec = Spectrum.build(found, "shoot", residuals, c, failures)
    if len(found) < count:
        raise SpectrumIncomplete(f"only {len(found)} of {count} roots converged", spectrum=spec)
    return spec
