"""Eigenvalues and eigenvectors of tridiagonal operators with constant off-diagonal."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from ..errors import InverseIterationStall, QRNoConvergence
from . import kernels
from .contour import TridiagOperator


def _check_count(count, n):
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")


def eig_sym_tridiag(diag, off, count, rtol=1e-12):
    """Lowest ``count`` eigenvalues of a real symmetric tridiagonal matrix.

    Each eigenvalue is isolated by Sturm-sequence bisection inside the
    Gershgorin interval and bracketed to width ``rtol * max(1, |lambda|)``.
    """
    d = np.ascontiguousarray(diag, dtype=float)
    off = float(off)
    _check_count(count, d.size)
    off2 = off * off
    radius = 2.0 * abs(off)
    lo, hi = float(d.min() - radius), float(d.max() + radius)
    pivmin = np.finfo(float).tiny * max(1.0, off2)
    out = []
    for k in range(count):
        # previous eigenvalue is a valid lower bracket for the next
        out.append(kernels.bisect_kth(d, off2, k, lo, hi, rtol, pivmin))
        lo = max(lo, out[-1] - rtol * max(1.0, abs(out[-1])))
    return out


def _order(vals):
    vals = np.asarray(vals, dtype=complex)
    return vals[np.lexsort((vals.imag, vals.real))]


def eig_complex_tridiag(diag, off, count, polish=True):
    """The ``count`` eigenvalues of smallest real part of a complex symmetric tridiagonal.

    All eigenvalues come from implicit QL iteration (QR on the reversed
    ordering) with complex orthogonal rotations and deflation, capped at 60*N
    sweeps. The selected eigenvalues are then polished by Newton steps on the
    characteristic polynomial, because complex orthogonal rotations are not
    unitary and lose accuracy on strongly non-normal operators.
    """
    d0 = np.ascontiguousarray(diag, dtype=complex)
    n = d0.size
    _check_count(count, n)
    off = complex(off)
    d = d0.copy()
    e = np.full(n, off, dtype=complex)
    e[-1] = 0
    if n > 1 and off != 0:
        stuck, _ = kernels.csym_ql(d, e, 60 * n)
        if stuck >= 0:
            raise QRNoConvergence(
                f"QL iteration stalled at index {stuck}", partial=_order(d[:stuck]), stuck_index=stuck
            )
    raw = _order(d)
    if not polish or off == 0:
        return list(raw[:count])
    take = raw[: min(n, count + 2)]
    off2 = off * off
    polished = []
    for i, lam in enumerate(take):
        others = np.delete(raw[: min(n, count + 3)], i)
        gap = np.min(np.abs(others - lam)) if others.size else np.inf
        new, _ = kernels.det_newton(d0, off2, lam, 12)
        polished.append(new if np.isfinite(new) and abs(new - lam) <= 0.25 * gap else lam)
    return list(_order(polished)[:count])


class Eigenvector(NamedTuple):
    vector: np.ndarray
    eigenvalue: complex
    residual: float


def _banded(op: TridiagOperator, shift):
    n = len(op)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = op.off
    ab[1] = op.diag - shift
    ab[2, :-1] = op.off
    return ab


def _solve_shifted(op, shift, b):
    ab = _banded(op, shift)
    try:
        return scipy.linalg.solve_banded((1, 1), ab, b, check_finite=False)
    except np.linalg.LinAlgError:
        nudge = 1e-13 * max(1.0, abs(shift))
        return scipy.linalg.solve_banded((1, 1), _banded(op, shift + nudge), b, check_finite=False)


def _start_vector(n):
    return np.random.default_rng(20240607).standard_normal(n).astype(complex)


def eigenpair_residual(op: TridiagOperator, lam, iterations=2) -> float:
    """||(T - lam) v|| / ||v|| after a few inverse-iteration steps from a fixed start."""
    v = _start_vector(len(op))
    for _ in range(iterations):
        v = _solve_shifted(op, lam, v)
        v /= np.linalg.norm(v)
    return float(np.linalg.norm(op.matvec(v) - lam * v))


def eigenvector_inverse_iteration(op: TridiagOperator, lam, max_iter=50, tol=1e-8) -> Eigenvector:
    """Eigenvector for the eigenvalue near ``lam`` by shifted inverse iteration.

    The returned vector lives on the interior samples, has unit discrete L2
    norm (h * sum |v|**2 = 1) and its largest entry is real and positive.
    Raises InverseIterationStall if the residual does not reach
    ``tol * max(1, |lambda|)`` within ``max_iter`` solves, or if the iteration
    settles on an eigenvalue further than 1e-6 from ``lam``.
    """
    lam = complex(lam)
    v = _start_vector(len(op))
    v /= np.linalg.norm(v)
    mu, res = lam, np.inf
    for _ in range(max_iter):
        v = _solve_shifted(op, lam, v)
        v /= np.linalg.norm(v)
        tv = op.matvec(v)
        mu = np.vdot(v, tv)
        res = float(np.linalg.norm(tv - mu * v))
        if res <= tol * max(1.0, abs(mu)):
            break
    else:
        raise InverseIterationStall(f"no convergence near {lam} (residual {res:.3g})")
    if abs(mu - lam) > 1e-6 * max(1.0, abs(lam)):
        raise InverseIterationStall(f"shift {lam} is not within 1e-6 of an eigenvalue (nearest {mu})")
    k = np.argmax(np.abs(v))
    v = v * (abs(v[k]) / v[k])
    v /= np.sqrt(op.contour.step * np.sum(np.abs(v) ** 2))
    return Eigenvector(v, complex(mu), res)
