"""Closed-form spectra used as ground truth for the solvers.

The formulas are stated in units hbar = 1, mass = 1/2 (kinetic term p**2).
:func:`exact_levels` recognizes the matching Hamiltonian shapes at any mass.
"""

import math
from dataclasses import replace

import numpy as np

from .errors import InputError
from .potential import Hamiltonian, IXPower, SecSquared, ShiftedPower

QUASI_PARITIES = (1, -1)


def _check_n(n_max):
    if n_max < 0:
        raise ValueError("n_max must be >= 0")


def ho_levels(omega, branch="standard", n_max=0):
    """omega*(n + 1/2) for n = 0..n_max; ``branch="negated"`` flips the sign."""
    _check_n(n_max)
    if omega <= 0:
        raise ValueError("omega must be positive")
    if branch not in ("standard", "negated"):
        raise ValueError(f"unknown branch {branch!r}")
    sgn = 1.0 if branch == "standard" else -1.0
    return [sgn * omega * (n + 0.5) for n in range(n_max + 1)]


def shifted_osc_levels(alpha, q, n_max):
    """Levels of p**2 + (x - ic)**2 + (alpha**2 - 1/4)/(x - ic)**2.

    For alpha = 1/2 the core vanishes and the levels are 2n + 1 regardless of
    the quasi-parity ``q``; otherwise they are 4n + 2 + 2 q alpha.
    """
    _check_n(n_max)
    if alpha < 0:
        raise ValueError("alpha must be >= 0; the sign lives in q")
    if q not in QUASI_PARITIES:
        raise ValueError("quasi-parity must be +1 or -1")
    if alpha == 0.5:
        return [2.0 * n + 1.0 for n in range(n_max + 1)]
    return [4.0 * n + 2.0 + 2.0 * q * alpha for n in range(n_max + 1)]


def trig_pt_levels(B, n_max):
    """Levels of p**2 + B sec**2(x) on (-pi/2, pi/2): (n + lam)**2.

    lam = (1 + sqrt(1 + 4B))/2. B = 0 is the infinite well of width pi.
    """
    _check_n(n_max)
    if B < 0:
        raise ValueError("B must be >= 0 (negative couplings have no bound states)")
    lam = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * B))
    return [(n + lam) ** 2 for n in range(n_max + 1)]


def exact_levels(h: Hamiltonian, count: int):
    """Lowest ``count`` closed-form levels of a recognized Hamiltonian.

    Recognized shapes: k (x-a)**2 [+ G/(x-a)**2], -g (ix)**2, and B sec**2(x-s).
    For a negative mass the operator is -H' with H' of positive mass, and the
    returned levels are the negated (top-of-spectrum) ones, ordered ascending.
    Raises InputError for anything else.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    terms = [t for t in h.potential.terms if t.coef != 0]
    mass = h.mass
    if mass < 0:
        flipped = [_neg(t) for t in terms]
        return sorted(-e for e in _levels_positive(-mass, flipped, count))
    return _levels_positive(mass, terms, count)


def _neg(t):
    return replace(t, coef=-t.coef)


def _levels_positive(mass, terms, count):
    terms = [t.as_shifted_power() if isinstance(t, IXPower) and t.nu == 2 else t for t in terms]
    if len(terms) == 1 and isinstance(terms[0], SecSquared):
        t = terms[0]
        if abs(t.coef.imag) > 0 or abs(t.shift.imag) > 0 or t.coef.real < 0:
            raise InputError("sec**2 closed form needs a real, non-negative coupling and real shift")
        # p**2/(2m) + B sec**2 = (1/2m) [p**2 + 2mB sec**2]
        return [e / (2 * mass) for e in trig_pt_levels(2 * mass * t.coef.real, count - 1)]
    quad = [t for t in terms if isinstance(t, ShiftedPower) and t.exponent == 2]
    core = [t for t in terms if isinstance(t, ShiftedPower) and t.exponent == -2]
    if len(quad) != 1 or len(core) > 1 or len(quad) + len(core) != len(terms):
        raise InputError("no closed-form spectrum for this potential")
    k = quad[0].coef
    if abs(k.imag) > 0 or k.real <= 0:
        raise InputError("oscillator closed form needs a real positive x**2 coupling")
    omega = math.sqrt(2 * k.real / mass)
    if not core:
        return ho_levels(omega, "standard", count - 1)
    g = core[0].coef
    shift = quad[0].shift
    if core[0].shift != shift or abs(g.imag) > 0:
        raise InputError("core term must share the oscillator shift and be real")
    arg = 2 * mass * g.real + 0.25
    if arg < 0:
        raise InputError("core coupling below the fall-to-centre threshold")
    alpha = math.sqrt(arg)
    # rescale the mass-1/2, omega-2 formulas: E = (omega/2) * E_ref
    if shift.imag == 0:
        # Hermitian singular core: only the regular (q = +1) family survives
        levels = shifted_osc_levels(alpha, 1, count - 1)
    else:
        both = shifted_osc_levels(alpha, 1, count - 1) + shifted_osc_levels(alpha, -1, count - 1)
        levels = sorted(set(both))[:count]
    return list(np.asarray(levels) * omega / 2.0)
