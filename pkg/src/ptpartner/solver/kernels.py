"""Compiled inner loops. Everything here works on plain numpy arrays."""

import numpy as np
from numba import njit

EPS = 2.220446049250313e-16


# --- real symmetric tridiagonal: Sturm sequence bisection ------------------


@njit(cache=True)
def sturm_count(d, off2, x, pivmin):
    """Number of eigenvalues strictly below x (constant off-diagonal squared = off2)."""
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, d.shape[0]):
        q = d[i] - x - off2 / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def bisect_kth(d, off2, k, lo, hi, rtol, pivmin):
    """k-th smallest eigenvalue (0-based) bracketed to width rtol * max(1, |lambda|)."""
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if hi - lo <= rtol * max(1.0, abs(mid)):
            break
        if sturm_count(d, off2, mid, pivmin) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# --- complex symmetric tridiagonal: implicit QL with complex rotations ------


@njit(cache=True)
def csym_ql(d, e, max_sweeps):
    """All eigenvalues of a complex symmetric tridiagonal matrix, in place.

    d is the diagonal, e[i] couples i and i+1 (e[n-1] is scratch). Rotations
    satisfy c**2 + s**2 = 1 in complex arithmetic so the matrix stays complex
    symmetric and tridiagonal. Returns (stuck_index, sweeps); stuck_index is -1
    on success.
    """
    n = d.shape[0]
    sweeps = 0
    for l in range(n):
        exceptional = 0
        while True:
            m = n - 1
            for mm in range(l, n - 1):
                if abs(e[mm]) <= EPS * (abs(d[mm]) + abs(d[mm + 1])):
                    m = mm
                    break
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return l, sweeps
            # shift from the leading 2x2 block of the unreduced segment
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = np.sqrt(g * g + 1.0)
            if abs(g + r) >= abs(g - r):
                g = d[m] - d[l] + e[l] / (g + r)
            else:
                g = d[m] - d[l] + e[l] / (g - r)
            if exceptional > 0 and exceptional % 10 == 0:
                # stagnation: kick the shift off the current orbit
                g = g + (0.75 + 0.5j) * abs(e[l])
            exceptional += 1
            s = 1.0 + 0.0j
            c = 1.0 + 0.0j
            p = 0.0 + 0.0j
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.sqrt(f * f + g * g)
                e[i + 1] = r
                if abs(r) == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return -1, sweeps


@njit(cache=True)
def det_newton(d, off2, lam, max_iter):
    """Newton iteration on det(T - lam) via the continuant recurrence.

    Returns (lam, last_step).
    """
    step = 0.0 + 0.0j
    tiny = 1e-300
    for _ in range(max_iter):
        q = d[0] - lam
        if q == 0:
            q = tiny + 0.0j
        dq = -1.0 + 0.0j
        acc = dq / q
        for i in range(1, d.shape[0]):
            qn = d[i] - lam - off2 / q
            dq = -1.0 + off2 * dq / (q * q)
            q = qn
            if q == 0:
                q = tiny + 0.0j
            acc += dq / q
        if acc == 0:
            break
        step = 1.0 / acc
        lam = lam - step
        if abs(step) <= 4.0 * EPS * max(1.0, abs(lam)):
            break
    return lam, step


# --- shooting ------------------------------------------------------------


@njit(cache=True)
def _rk4_run(vg, vm, k, E, h, start, stop, direction, p, dp):
    j = start
    while j != stop:
        jn = j + direction
        jm = j if direction > 0 else j - 1
        step = h * direction
        a1 = k * (vg[j] - E)
        a2 = k * (vm[jm] - E)
        a3 = k * (vg[jn] - E)
        k1p = dp
        k1d = a1 * p if p != 0 else 0.0j
        k2p = dp + 0.5 * step * k1d
        k2d = a2 * (p + 0.5 * step * k1p)
        k3p = dp + 0.5 * step * k2d
        k3d = a2 * (p + 0.5 * step * k2p)
        k4p = dp + step * k3d
        k4d = a3 * (p + step * k3p)
        p = p + step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        dp = dp + step / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        big = max(abs(p), abs(dp))
        if big > 1e100:
            # the normalized Wronskian is scale invariant
            p = p / big
            dp = dp / big
        j = jn
    return p, dp


@njit(cache=True)
def wronskian(vg, vm, k, E, h, imid):
    """Normalized Wronskian mismatch at grid index imid.

    vg holds V on the grid points, vm on the midpoints between them; k is
    2m/hbar**2. Both solutions start from psi = 0, |psi'| = h at their ends.
    """
    n = vg.shape[0]
    pl, dpl = _rk4_run(vg, vm, k, E, h, 0, imid, 1, 0.0j, h + 0.0j)
    pr, dpr = _rk4_run(vg, vm, k, E, h, n - 1, imid, -1, 0.0j, -h + 0.0j)
    nl = np.sqrt(abs(pl) ** 2 + abs(dpl) ** 2)
    nr = np.sqrt(abs(pr) ** 2 + abs(dpr) ** 2)
    return (pl * dpr - dpl * pr) / (nl * nr)
