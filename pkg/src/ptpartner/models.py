"""Ready-made Hamiltonians used throughout the tests, CLI examples and reports.

All defaults use hbar = 1 and mass 1/2, so the kinetic term is p**2.
"""

from .potential import (
    Hamiltonian,
    IXPower,
    PotentialExpr,
    SechSquared,
    SecSquared,
    ShiftedPower,
)


def free(mass=0.5):
    return Hamiltonian(mass, PotentialExpr())


def harmonic(omega=2.0, mass=0.5):
    """(m w**2 / 2) x**2, declared proportional to the mass."""
    return Hamiltonian(mass, PotentialExpr((ShiftedPower(mass * omega**2 / 2, 0, 2, "m"),)))


def shifted_oscillator(alpha, c=1.0, omega=2.0, mass=0.5):
    """Imaginary-shift oscillator with a regularized centrifugal core.

    V = (m w**2/2)(x - ic)**2 + G/(x - ic)**2 with G = (alpha**2 - 1/4)/(2m).
    Both coefficients are tagged as mass dependent. The core term is dropped
    when alpha == 1/2, where G vanishes.
    """
    shift = 1j * c
    terms = [ShiftedPower(mass * omega**2 / 2, shift, 2, "m")]
    g = (alpha**2 - 0.25) / (2 * mass)
    if g != 0:
        terms.append(ShiftedPower(g, shift, -2, "inv_m"))
    return Hamiltonian(mass, PotentialExpr(tuple(terms)))


def bender_boettcher(g=1.0, nu=3, mass=0.5):
    """-g (ix)**nu."""
    return Hamiltonian(mass, PotentialExpr((IXPower(g, nu),)))


def sech_well(A, c=1.0, mass=0.5):
    """-A sech**2(x - ic)."""
    return Hamiltonian(mass, PotentialExpr((SechSquared(-A, 1j * c),)))


def trig_well(B, mass=0.5):
    """B sec**2(x); bound states live on (-pi/2, pi/2) when B >= 0."""
    return Hamiltonian(mass, PotentialExpr((SecSquared(B, 0),)))


def cubic_oscillator(m2, f, sign=1, mass=0.5):
    """sign * m2 * x**2 + i f x**3 (the two mass-sign variants of the cubic oscillator)."""
    terms = (ShiftedPower(sign * m2, 0, 2), ShiftedPower(1j * f, 0, 3))
    return Hamiltonian(mass, PotentialExpr(terms))
