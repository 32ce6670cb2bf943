"""Closed term algebra for complex one-dimensional potentials.

A potential is an ordered sum of terms drawn from four families::

    shifted_power   coef * (x - shift)**exp
    ix_power        -coef * (i x)**nu
    sech2           coef * sech(x - shift)**2
    sec2            coef * sec(x - shift)**2

The family is closed under the imaginary rotations x -> +/- i y and under the
mass and coupling sign flips, so every transformation below is exact
coefficient bookkeeping rather than sampling.

Units are hbar = 1. The canonical mass for comparisons with textbook spectra is
1/2, which makes the kinetic term p**2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import ClassVar, Iterable, Sequence, Union

import numpy as np

from .errors import (
    BranchAmbiguity,
    IndexOutOfRange,
    NonFinite,
    NotClosedUnderTransform,
    NotPTSymmetric,
    PoleProximity,
    RotatedNotReal,
    SchemaError,
)

POLE_TOL = 1e-12
MASS_DEPS = (None, "m", "inv_m")

Number = Union[int, float, complex]


def _as_complex(value, name: str) -> complex:
    try:
        z = complex(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{name} must be a complex number, got {value!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise SchemaError(f"{name} must be finite, got {z!r}")
    return z


def _as_real(value, name: str) -> float:
    if isinstance(value, complex):
        raise SchemaError(f"{name} must be real, got {value!r}")
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise SchemaError(f"{name} must be real, got {value!r}") from None
    if not math.isfinite(x):
        raise SchemaError(f"{name} must be finite, got {x!r}")
    return x


def _is_integral(x: float) -> bool:
    return float(x).is_integer()


def _times_unit(z: complex, power: int) -> complex:
    """z * i**power, done by swapping components so no rounding occurs."""
    power %= 4
    if power == 0:
        return complex(z.real, z.imag)
    if power == 1:
        return complex(-z.imag, z.real)
    if power == 2:
        return complex(-z.real, -z.imag)
    return complex(z.imag, -z.real)


def _i_power(sign: int, k: int) -> int:
    """Exponent p such that (sign * i)**k == i**p, for integer k."""
    return k if sign > 0 else -k


def _nearest_periodic_distance(w):
    """Distance from w to the nearest point of pi/2 + k*pi (k integer)."""
    k = np.round((np.real(w) - np.pi / 2) / np.pi)
    return np.abs(w - (np.pi / 2 + k * np.pi))


def _check_mass_dep(mass_dep):
    if mass_dep not in MASS_DEPS:
        raise SchemaError(f"mass_dep must be one of {MASS_DEPS}, got {mass_dep!r}")
    return mass_dep


@dataclass(frozen=True)
class ShiftedPower:
    """``coef * (x - shift)**exponent``.

    Negative exponents declare a pole at ``shift``. Non-integer exponents use
    the principal branch; they only arise from rotating ``ix_power`` terms.
    """

    coef: complex
    shift: complex = 0j
    exponent: Union[int, float] = 0
    mass_dep: str | None = None

    kind: ClassVar[str] = "shifted_power"

    def __post_init__(self):
        object.__setattr__(self, "coef", _as_complex(self.coef, "coef"))
        object.__setattr__(self, "shift", _as_complex(self.shift, "shift"))
        exp = _as_real(self.exponent, "exp")
        object.__setattr__(self, "exponent", int(exp) if _is_integral(exp) else exp)
        _check_mass_dep(self.mass_dep)

    def __call__(self, z):
        w = np.asarray(z, dtype=complex) - self.shift
        if isinstance(self.exponent, int):
            if self.exponent >= 0:
                return self.coef * w**self.exponent
            return self.coef / w ** (-self.exponent)
        return self.coef * np.power(w, self.exponent)

    def poles(self) -> tuple[complex, ...]:
        if self.exponent < 0 and self.coef != 0:
            return (self.shift,)
        return ()

    def pole_distance(self, z):
        z = np.asarray(z, dtype=complex)
        if self.poles():
            return np.abs(z - self.shift)
        return np.full(z.shape, np.inf)


@dataclass(frozen=True)
class IXPower:
    """``-coef * (i x)**nu`` on the principal branch."""

    coef: float
    nu: Union[int, float] = 2
    mass_dep: str | None = None

    kind: ClassVar[str] = "ix_power"

    def __post_init__(self):
        object.__setattr__(self, "coef", _as_real(self.coef, "coef"))
        nu = _as_real(self.nu, "nu")
        if nu < 2:
            raise SchemaError(f"ix_power requires nu >= 2, got {nu}")
        object.__setattr__(self, "nu", int(nu) if _is_integral(nu) else nu)
        _check_mass_dep(self.mass_dep)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if isinstance(self.nu, int):
            return _times_unit(complex(-self.coef), self.nu) * z**self.nu
        return -self.coef * np.power(1j * z, self.nu)

    def poles(self) -> tuple[complex, ...]:
        return ()

    def pole_distance(self, z):
        return np.full(np.shape(z), np.inf)

    def as_shifted_power(self) -> ShiftedPower:
        """Equivalent shifted_power form, available for integer nu only."""
        if not isinstance(self.nu, int):
            raise BranchAmbiguity(f"(ix)**{self.nu} has no single-monomial form")
        return ShiftedPower(_times_unit(complex(-self.coef), self.nu), 0j, self.nu, self.mass_dep)


@dataclass(frozen=True)
class SechSquared:
    """``coef * sech(x - shift)**2``; poles at shift + i(pi/2 + k pi)."""

    coef: complex
    shift: complex = 0j
    mass_dep: str | None = None

    kind: ClassVar[str] = "sech2"

    def __post_init__(self):
        object.__setattr__(self, "coef", _as_complex(self.coef, "coef"))
        object.__setattr__(self, "shift", _as_complex(self.shift, "shift"))
        _check_mass_dep(self.mass_dep)

    def __call__(self, z):
        c = np.cosh(np.asarray(z, dtype=complex) - self.shift)
        return self.coef / (c * c)

    def poles(self) -> tuple[complex, ...]:
        return ()  # infinitely many; see pole_distance / real_poles

    def pole_distance(self, z):
        if self.coef == 0:
            return np.full(np.shape(z), np.inf)
        w = -1j * (np.asarray(z, dtype=complex) - self.shift)
        return _nearest_periodic_distance(w)


@dataclass(frozen=True)
class SecSquared:
    """``coef * sec(x - shift)**2``; poles at shift + pi/2 + k pi."""

    coef: complex
    shift: complex = 0j
    mass_dep: str | None = None

    kind: ClassVar[str] = "sec2"

    def __post_init__(self):
        object.__setattr__(self, "coef", _as_complex(self.coef, "coef"))
        object.__setattr__(self, "shift", _as_complex(self.shift, "shift"))
        _check_mass_dep(self.mass_dep)

    def __call__(self, z):
        c = np.cos(np.asarray(z, dtype=complex) - self.shift)
        return self.coef / (c * c)

    def poles(self) -> tuple[complex, ...]:
        return ()

    def pole_distance(self, z):
        if self.coef == 0:
            return np.full(np.shape(z), np.inf)
        return _nearest_periodic_distance(np.asarray(z, dtype=complex) - self.shift)


PotentialTerm = Union[ShiftedPower, IXPower, SechSquared, SecSquared]
TERM_TYPES = (ShiftedPower, IXPower, SechSquared, SecSquared)


@dataclass(frozen=True)
class PotentialExpr:
    """Ordered sum of potential terms. The empty sum is the zero potential."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if not isinstance(t, TERM_TYPES):
                raise SchemaError(f"not a potential term: {t!r}")
        object.__setattr__(self, "terms", terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __getitem__(self, i):
        return self.terms[i]

    def __call__(self, z):
        """Raw vectorized evaluation; no pole or overflow checks."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        with np.errstate(all="ignore"):
            for t in self.terms:
                out = out + t(z)
        return out

    def pole_distance(self, z):
        z = np.asarray(z, dtype=complex)
        d = np.full(z.shape, np.inf)
        for t in self.terms:
            d = np.minimum(d, t.pole_distance(z))
        return d

    def evaluate(self, z, pole_tol: float = POLE_TOL):
        """Checked evaluation: raises PoleProximity / NonFinite."""
        z = np.asarray(z, dtype=complex)
        dist = self.pole_distance(z)
        if np.any(dist <= pole_tol):
            bad = z.ravel()[np.argmin(dist.ravel())]
            raise PoleProximity(f"point {bad} lies within {pole_tol:g} of a pole")
        v = self(z)
        if not np.all(np.isfinite(v)):
            raise NonFinite("potential evaluation overflowed")
        return v

    def real_poles(self, window=(-12.0, 12.0), tol: float = 1e-12) -> list[float]:
        """Pole locations on the real axis inside ``window``, ascending."""
        lo, hi = window
        found = []
        for t in self.terms:
            if isinstance(t, ShiftedPower):
                for p in t.poles():
                    if abs(p.imag) <= tol and lo <= p.real <= hi:
                        found.append(p.real)
            elif isinstance(t, (SecSquared, SechSquared)) and t.coef != 0:
                if isinstance(t, SecSquared):
                    on_axis = abs(t.shift.imag) <= tol
                    base = t.shift.real + np.pi / 2
                else:
                    # sech poles: shift + i(pi/2 + k pi) is real iff Im(shift) = -(pi/2 + k pi)
                    on_axis = _nearest_periodic_distance(-t.shift.imag) <= tol
                    base = t.shift.real
                if not on_axis:
                    continue
                if isinstance(t, SechSquared):
                    if lo <= base <= hi:
                        found.append(base)
                    continue
                k0 = math.ceil((lo - base) / np.pi)
                k1 = math.floor((hi - base) / np.pi)
                found.extend(base + k * np.pi for k in range(k0, k1 + 1))
        return sorted(set(found))


def eval_potential(expr: PotentialExpr, z: Number) -> complex:
    """Value of ``expr`` at a single complex point."""
    return complex(expr.evaluate(np.asarray([z]))[0])


@dataclass(frozen=True)
class Hamiltonian:
    """``p**2 / (2 mass) + V(x)`` with a signed, nonzero mass and hbar = 1."""

    mass: float
    potential: PotentialExpr = field(default_factory=PotentialExpr)
    hbar: float = 1.0

    def __post_init__(self):
        mass = _as_real(self.mass, "mass")
        if mass == 0:
            raise SchemaError("mass must be nonzero")
        if self.hbar != 1.0:
            raise SchemaError("only hbar = 1 is supported")
        object.__setattr__(self, "mass", mass)
        if not isinstance(self.potential, PotentialExpr):
            object.__setattr__(self, "potential", PotentialExpr(tuple(self.potential)))

    @property
    def kinetic_factor(self) -> float:
        """hbar**2 / (2 mass); the coefficient of -d**2/dx**2."""
        return self.hbar**2 / (2.0 * self.mass)


# ---------------------------------------------------------------------------
# symmetry checks


def _symmetric_grid(expr: PotentialExpr, half_width=5.0, n=100, clearance=1e-3):
    x = np.linspace(0.05, half_width, n)
    keep = (expr.pole_distance(x) > clearance) & (expr.pole_distance(-x) > clearance)
    x = x[keep]
    return np.concatenate([-x[::-1], x])


def default_grid(expr: PotentialExpr) -> np.ndarray:
    """Symmetric real sample grid on [-5, 5] that keeps clear of poles."""
    return _symmetric_grid(expr)


def check_pt_symmetry(expr: PotentialExpr, grid: Sequence[float], tol: float):
    """Test V(x) == conj(V(-x)) on a grid symmetric about the origin.

    Returns ``(passed, max_deviation)``.
    """
    x = np.asarray(grid, dtype=float)
    if x.size == 0:
        raise ValueError("grid must be nonempty")
    if not np.allclose(np.sort(x), np.sort(-x), rtol=0, atol=1e-12):
        raise ValueError("grid must be symmetric about 0")
    dev = np.abs(expr.evaluate(x) - np.conj(expr.evaluate(-x)))
    worst = float(dev.max())
    return worst <= tol, worst


def check_real_on_axis(expr: PotentialExpr, grid: Sequence[float], tol: float):
    """Test that V is real on a set of real points; returns ``(passed, max |Im V|)``."""
    x = np.asarray(grid, dtype=float)
    if x.size == 0:
        raise ValueError("grid must be nonempty")
    worst = float(np.abs(expr.evaluate(x).imag).max())
    return worst <= tol, worst


# ---------------------------------------------------------------------------
# transformations


def _rotate_term(t, sign: int):
    # x = sign*i*y; (x - a) = sign*i*(y - a'), a' = -sign*i*a
    shift_turn = 1 if sign < 0 else 3  # multiply by i**shift_turn == -sign*i
    if isinstance(t, ShiftedPower):
        if not isinstance(t.exponent, int):
            raise BranchAmbiguity(
                f"rotating a non-integer power {t.exponent} needs a branch choice",
                phase=complex(np.exp(1j * sign * np.pi / 2 * t.exponent)),
            )
        coef = _times_unit(t.coef, _i_power(sign, t.exponent))
        return ShiftedPower(coef, _times_unit(t.shift, shift_turn), t.exponent, t.mass_dep)
    if isinstance(t, IXPower):
        # i*x = i*(sign*i*y) = -sign*y
        if sign < 0:
            return ShiftedPower(complex(-t.coef), 0j, t.nu, t.mass_dep)
        if not isinstance(t.nu, int):
            raise BranchAmbiguity(
                f"(ix)**{t.nu} under x -> +iy picks up the phase (-1)**{t.nu}",
                phase=complex(np.exp(1j * np.pi * t.nu)),
            )
        return ShiftedPower(complex(-t.coef * (-1) ** t.nu), 0j, t.nu, t.mass_dep)
    if isinstance(t, SechSquared):
        return SecSquared(t.coef, _times_unit(t.shift, shift_turn), t.mass_dep)
    if isinstance(t, SecSquared):
        return SechSquared(t.coef, _times_unit(t.shift, shift_turn), t.mass_dep)
    raise SchemaError(f"unknown term {t!r}")


def rotate_potential(expr: PotentialExpr, sign: int) -> PotentialExpr:
    """Substitute x -> sign*i*y term by term (sign is +1 or -1).

    Shifted powers pick up ``(sign*i)**k`` and their shift becomes
    ``-sign*i*shift``; sech**2 and sec**2 swap into each other; ``-g (ix)**nu``
    becomes ``-g y**nu`` for sign -1.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return PotentialExpr(tuple(_rotate_term(t, sign) for t in expr.terms))


def eta_series(coeffs: Sequence[Number], beta: float) -> list[complex]:
    """Coefficients of F(exp(-i beta) x) given those of the power series F."""
    if not math.isfinite(beta):
        raise ValueError("beta must be finite")
    a = np.array([_as_complex(c, "coefficient") for c in coeffs], dtype=complex)
    return list(a * np.exp(-1j * beta * np.arange(a.size)))


def expr_from_coeffs(coeffs: Sequence[Number]) -> PotentialExpr:
    """Power series sum_n A_n x**n as a potential (zero coefficients dropped)."""
    return PotentialExpr(
        tuple(ShiftedPower(c, 0j, n) for n, c in enumerate(coeffs) if complex(c) != 0)
    )


def eta_transform(expr: PotentialExpr, beta: float) -> PotentialExpr:
    """Apply x -> exp(-i beta) x to every term.

    Shifted powers transform in closed form for any beta. Hyperbolic and
    trigonometric terms stay in the algebra only when exp(-i beta) is a power
    of i; other angles raise NotClosedUnderTransform.
    """
    if not math.isfinite(beta):
        raise ValueError("beta must be finite")
    u = complex(np.exp(-1j * beta))
    quarter = beta / (np.pi / 2)
    exact_quarter = abs(quarter - round(quarter)) < 1e-12
    out = []
    for t in expr.terms:
        if isinstance(t, IXPower):
            if not isinstance(t.nu, int):
                raise BranchAmbiguity(f"(ix)**{t.nu} under x -> exp(-i beta) x is branch dependent")
            t = t.as_shifted_power()
        if isinstance(t, ShiftedPower):
            if not isinstance(t.exponent, int):
                raise BranchAmbiguity(f"non-integer power {t.exponent} is branch dependent")
            out.append(ShiftedPower(t.coef * u**t.exponent, t.shift / u, t.exponent, t.mass_dep))
            continue
        if not exact_quarter:
            raise NotClosedUnderTransform(f"{t.kind} is not closed under x -> exp(-i*{beta}) x")
        q = int(round(quarter)) % 4  # u == i**(-q)
        shift = _times_unit(t.shift, q)
        if q % 2 == 0:
            out.append(replace(t, shift=shift))
        else:
            flipped = SecSquared if isinstance(t, SechSquared) else SechSquared
            out.append(flipped(t.coef, shift, t.mass_dep))
    return PotentialExpr(tuple(out))


def _negate_coef(t):
    if isinstance(t, IXPower):
        return replace(t, coef=-t.coef)
    return replace(t, coef=complex(-t.coef.real, -t.coef.imag))


def mass_flip(h: Hamiltonian) -> Hamiltonian:
    """Negate the mass; terms declared proportional to m or 1/m change sign too."""
    terms = tuple(_negate_coef(t) if t.mass_dep else t for t in h.potential.terms)
    return Hamiltonian(-h.mass, PotentialExpr(terms), h.hbar)


def coupling_flip(expr: PotentialExpr, term_index: int) -> PotentialExpr:
    """Negate the coupling constant of one term."""
    if not 0 <= term_index < len(expr.terms):
        raise IndexOutOfRange(f"term index {term_index} out of range for {len(expr.terms)} terms")
    terms = list(expr.terms)
    terms[term_index] = _negate_coef(terms[term_index])
    return PotentialExpr(tuple(terms))


@dataclass(frozen=True)
class PartnerDiagnostics:
    pt_deviation: float
    rotated_real: bool
    real_deviation: float
    real_poles: tuple

    def to_dict(self):
        return {
            "pt_deviation": self.pt_deviation,
            "rotated_real": self.rotated_real,
            "real_deviation": self.real_deviation,
            "real_poles": list(self.real_poles),
        }


def hermitian_partner(h: Hamiltonian, sign: int = -1, grid=None, tol: float = 1e-9):
    """Map a PT-symmetric Hamiltonian to its Hermitian partner.

    The potential is rotated with ``x -> sign*i*y`` and the kinetic term's sign
    is absorbed into the mass, ``m -> -m``. Mass-proportional coefficients keep
    their rotated values: rewritten in terms of the flipped mass they stay
    proportional to it, e.g. ``-(m w**2/2)(y+c)**2 == (m' w**2/2)(y+c)**2``
    with ``m' = -m``.

    Returns ``(partner, PartnerDiagnostics)``.
    """
    grid = default_grid(h.potential) if grid is None else np.asarray(grid, dtype=float)
    is_pt, pt_dev = check_pt_symmetry(h.potential, grid, tol)
    if not is_pt:
        raise NotPTSymmetric(f"potential is not PT-symmetric (max deviation {pt_dev:.3g})")
    rotated = rotate_potential(h.potential, sign)
    rgrid = default_grid(rotated)
    is_real, real_dev = check_real_on_axis(rotated, rgrid, tol)
    if not is_real:
        raise RotatedNotReal(f"rotated potential has |Im V| up to {real_dev:.3g}")
    partner = Hamiltonian(-h.mass, rotated, h.hbar)
    diag = PartnerDiagnostics(pt_dev, is_real, real_dev, tuple(rotated.real_poles()))
    return partner, diag


# ---------------------------------------------------------------------------
# transform specs


TRANSFORM_KINDS = ("rotate_plus", "rotate_minus", "eta_series", "mass_flip", "coupling_flip")


@dataclass(frozen=True)
class TransformSpec:
    kind: str
    beta: float | None = None
    term_index: int | None = None

    def __post_init__(self):
        if self.kind not in TRANSFORM_KINDS:
            raise SchemaError(f"unknown transform {self.kind!r}")
        if self.kind == "eta_series" and (self.beta is None or not math.isfinite(self.beta)):
            raise SchemaError("eta_series needs a finite beta")
        if self.kind == "coupling_flip" and self.term_index is None:
            raise SchemaError("coupling_flip needs a term index")

    @classmethod
    def parse(cls, text: str) -> "TransformSpec":
        """Parse the CLI grammar: rotate-minus, rotate-plus, eta:<beta>, mass-flip, coupling-flip:<i>."""
        name, _, arg = text.partition(":")
        try:
            if name == "rotate-minus" and not arg:
                return cls("rotate_minus")
            if name == "rotate-plus" and not arg:
                return cls("rotate_plus")
            if name == "mass-flip" and not arg:
                return cls("mass_flip")
            if name == "eta":
                return cls("eta_series", beta=float(arg))
            if name == "coupling-flip":
                return cls("coupling_flip", term_index=int(arg))
        except ValueError:
            pass
        raise SchemaError(f"cannot parse transform {text!r}")

    def apply(self, h: Hamiltonian) -> Hamiltonian:
        if self.kind == "mass_flip":
            return mass_flip(h)
        if self.kind == "rotate_minus":
            pot = rotate_potential(h.potential, -1)
        elif self.kind == "rotate_plus":
            pot = rotate_potential(h.potential, 1)
        elif self.kind == "eta_series":
            pot = eta_transform(h.potential, self.beta)
        else:
            pot = coupling_flip(h.potential, self.term_index)
        return Hamiltonian(h.mass, pot, h.hbar)


def canonical(expr: PotentialExpr) -> PotentialExpr:
    """Normal form used for equality: integer-nu ix_power terms become monomials."""
    terms = []
    for t in expr.terms:
        if isinstance(t, IXPower) and isinstance(t.nu, int):
            t = t.as_shifted_power()
        terms.append(t)
    return PotentialExpr(tuple(terms))


# ---------------------------------------------------------------------------
# JSON


def _pair(z: complex) -> list[float]:
    return [z.real + 0.0, z.imag + 0.0]  # + 0.0 folds -0.0 into 0.0


def _unpair(v, name):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SchemaError(f"{name} must be a [re, im] pair, got {v!r}")
    if any(isinstance(p, bool) or not isinstance(p, (int, float)) for p in v):
        raise SchemaError(f"{name} entries must be numbers, got {v!r}")
    return _as_complex(complex(v[0], v[1]), name)


def term_to_dict(t) -> dict:
    if isinstance(t, IXPower):
        d = {"kind": t.kind, "coef": t.coef + 0.0, "nu": t.nu}
    elif isinstance(t, ShiftedPower):
        d = {"kind": t.kind, "coef": _pair(t.coef), "shift": _pair(t.shift), "exp": t.exponent}
    else:
        d = {"kind": t.kind, "coef": _pair(t.coef), "shift": _pair(t.shift)}
    if t.mass_dep:
        d["mass_dep"] = t.mass_dep
    return d


def term_from_dict(d: dict):
    if not isinstance(d, dict):
        raise SchemaError(f"term must be an object, got {d!r}")
    kind = d.get("kind")
    allowed = {
        "shifted_power": {"kind", "coef", "shift", "exp", "mass_dep"},
        "ix_power": {"kind", "coef", "nu", "mass_dep"},
        "sech2": {"kind", "coef", "shift", "mass_dep"},
        "sec2": {"kind", "coef", "shift", "mass_dep"},
    }
    if kind not in allowed:
        raise SchemaError(f"unknown term kind {kind!r}")
    extra = set(d) - allowed[kind]
    if extra:
        raise SchemaError(f"unexpected keys for {kind}: {sorted(extra)}")
    mass_dep = d.get("mass_dep")
    try:
        if kind == "shifted_power":
            exp = d["exp"]
            if isinstance(exp, bool) or not isinstance(exp, (int, float)):
                raise SchemaError(f"exp must be a number, got {exp!r}")
            return ShiftedPower(
                _unpair(d["coef"], "coef"), _unpair(d.get("shift", [0, 0]), "shift"), exp, mass_dep
            )
        if kind == "ix_power":
            if isinstance(d["coef"], (list, bool)) or isinstance(d["nu"], bool):
                raise SchemaError("ix_power coef and nu must be real numbers")
            return IXPower(d["coef"], d["nu"], mass_dep)
        cls = SechSquared if kind == "sech2" else SecSquared
        return cls(_unpair(d["coef"], "coef"), _unpair(d.get("shift", [0, 0]), "shift"), mass_dep)
    except KeyError as exc:
        raise SchemaError(f"{kind} term is missing {exc.args[0]!r}") from None


def hamiltonian_to_dict(h: Hamiltonian) -> dict:
    return {"mass": h.mass + 0.0, "terms": [term_to_dict(t) for t in h.potential.terms]}


def hamiltonian_from_dict(d: dict) -> Hamiltonian:
    if not isinstance(d, dict):
        raise SchemaError("Hamiltonian JSON must be an object")
    extra = set(d) - {"mass", "terms"}
    if extra:
        raise SchemaError(f"unexpected keys: {sorted(extra)}")
    if "mass" not in d or isinstance(d["mass"], (bool, list)):
        raise SchemaError("missing or invalid 'mass'")
    terms = d.get("terms", [])
    if not isinstance(terms, list):
        raise SchemaError("'terms' must be a list")
    return Hamiltonian(d["mass"], PotentialExpr(tuple(term_from_dict(t) for t in terms)))


def dumps(h: Hamiltonian) -> str:
    """Canonical JSON text (fixed key order, trailing newline)."""
    return json.dumps(hamiltonian_to_dict(h), indent=2) + "\n"


def loads(text: str) -> Hamiltonian:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return hamiltonian_from_dict(data)


def terms_equal(a: Iterable, b: Iterable, tol: float = 1e-14) -> bool:
    """Term-by-term equality of two expressions within ``tol`` on every number."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False
    for s, t in zip(a, b):
        if type(s) is not type(t) or s.mass_dep != t.mass_dep:
            return False
        if abs(s.coef - t.coef) > tol:
            return False
        if isinstance(s, IXPower):
            if s.nu != t.nu:
                return False
            continue
        if abs(s.shift - t.shift) > tol:
            return False
        if isinstance(s, ShiftedPower) and s.exponent != t.exponent:
            return False
    return True
