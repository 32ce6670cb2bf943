"""Spectrum container and the high-level solve pipelines."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ..potential import Hamiltonian
from .contour import Contour, discretize
from .eigen import eig_complex_tridiag, eig_sym_tridiag, eigenpair_residual
from .shooting import shoot_find

CSV_COLUMNS = ("index", "re", "im", "residual", "method", "n_points", "contour_kind", "imag_offset")


def _fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


@dataclass
class Spectrum:
    """Eigenvalues sorted by real part (ties by imaginary part) plus provenance."""

    eigenvalues: np.ndarray
    method: str
    residuals: np.ndarray
    contour: Contour | None = None
    failures: list = field(default_factory=list)

    @classmethod
    def build(cls, values, method, residuals, contour=None, failures=()):
        values = np.asarray(values, dtype=complex)
        residuals = np.asarray(residuals, dtype=float)
        order = np.lexsort((values.imag, values.real))
        return cls(values[order], method, residuals[order], contour, list(failures))

    def __len__(self):
        return self.eigenvalues.size

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        c = self.contour
        for i, (lam, res) in enumerate(zip(self.eigenvalues, self.residuals)):
            w.writerow([
                i,
                _fmt(lam.real),
                _fmt(lam.imag),
                _fmt(res),
                self.method,
                c.n_points if c else "",
                c.kind if c else "",
                _fmt(c.imag_offset) if c else "",
            ])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Spectrum":
        rows = list(csv.DictReader(io.StringIO(text)))
        vals = [complex(float(r["re"]), float(r["im"])) for r in rows]
        res = [float(r["residual"]) for r in rows]
        method = rows[0]["method"] if rows else ""
        return cls.build(vals, method, res)


def _physical_operator(h: Hamiltonian, c: Contour):
    """Operator whose lowest eigenvalues are the physical ones, and the sign to undo.

    With a negative mass the kinetic term is bounded above, so the bound
    levels sit at the top of the spectrum; we solve -T and negate back.
    """
    op = discretize(h, c)
    if h.mass < 0:
        return -op, -1.0
    return op, 1.0


def _fd_values(h, c, count, method):
    op, sign = _physical_operator(h, c)
    if method == "auto":
        method = "sturm" if op.is_real else "qr"
    if method == "sturm":
        if not op.is_real:
            raise ValueError("Sturm bisection needs a real symmetric operator")
        vals = np.asarray(eig_sym_tridiag(op.diag.real, op.off.real, count), dtype=complex)
    elif method == "qr":
        vals = np.asarray(eig_complex_tridiag(op.diag, op.off, count), dtype=complex)
    else:
        raise ValueError(f"unknown matrix method {method!r}")
    return op, sign, vals, method


def solve_fd(h: Hamiltonian, c: Contour, count: int, method="auto", richardson=False) -> Spectrum:
    """Finite-difference spectrum: the ``count`` physical levels of h on c.

    ``method`` is "sturm" (real operators), "qr" (any) or "auto". With
    ``richardson=True`` the problem is also solved with half the step and the
    two results are combined as (4*fine - coarse)/3, cancelling the h**2 error
    of the three-point stencil; the residual column then holds the
    extrapolation correction |fine - coarse|/3.
    """
    op, sign, vals, method = _fd_values(h, c, count, method)
    if richardson:
        return _richardson(h, c, count, method, sign, vals)
    res = [eigenpair_residual(op, lam) for lam in vals]
    return Spectrum.build(sign * vals, f"fd-{method}", res, c)


def _richardson(h, c, count, method, sign, coarse):
    _, _, fine, _ = _fd_values(h, c.with_points(2 * c.n_points - 1), count, method)
    extrap = (4.0 * fine - coarse) / 3.0
    return Spectrum.build(sign * extrap, f"fd-{method}+richardson", np.abs(fine - coarse) / 3.0, c)


def solve_shoot(h: Hamiltonian, c: Contour, count: int, seeds=None) -> Spectrum:
    """Shooting spectrum seeded by the complex QR spectrum unless seeds are given."""
    if seeds is None:
        seeds = solve_fd(h, c, count, method="qr").eigenvalues
    return shoot_find(h, c, seeds, count)


@dataclass
class CrossCheck:
    matrix: Spectrum
    shooting: Spectrum
    max_difference: float


def cross_method(h: Hamiltonian, c: Contour, count: int) -> CrossCheck:
    """Richardson-extrapolated complex QR levels against shooting refinement.

    The shooting seeds come from the raw QR spectrum; the two methods share no
    numerical code beyond potential evaluation.
    """
    _, sign, raw, _ = _fd_values(h, c, count, "qr")
    matrix = _richardson(h, c, count, "qr", sign, raw)
    shot = shoot_find(h, c, sign * raw, count)
    diff = float(np.max(np.abs(matrix.eigenvalues - shot.eigenvalues)))
    return CrossCheck(matrix, shot, diff)
