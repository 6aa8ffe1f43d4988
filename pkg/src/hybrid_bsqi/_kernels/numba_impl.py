"""Loop kernels compiled with numba.

Arrays arrive as (rows, components) in C order and are walked flattened, so
neighbouring nodes sit p entries apart. Stencil loops read through shifted
views indexed by the bare loop counter: numba then drops its negative-index
handling and LLVM is free to vectorise.
"""

import numpy as np
from numba import njit

# scheme ids, mirror SchemeKind
CBSQI, QNBSQI, WENO3, WENO5 = 0, 1, 2, 3
# built-in flux ids, mirror FLUX_IDS
ADVECTION, BURGERS, BUCKLEY_LEVERETT, NONCONVEX, EULER = 0, 1, 2, 3, 4

_jit = njit(cache=True, error_model="numpy")
_fast = njit(cache=True, error_model="numpy", fastmath=True)
_inline = njit(cache=True, error_model="numpy", inline="always")


@_inline
def _weno3_face(vm, v0, vp, eps):
    b0 = (v0 - vm) * (v0 - vm)
    b1 = (vp - v0) * (vp - v0)
    a0 = (1.0 / 3.0) / ((eps + b0) * (eps + b0))
    a1 = (2.0 / 3.0) / ((eps + b1) * (eps + b1))
    return (a0 * (-0.5 * vm + 1.5 * v0) + a1 * (0.5 * v0 + 0.5 * vp)) / (a0 + a1)


@_inline
def _weno5_face(vmm, vm, v0, vp, vpp, eps):
    d0 = vmm - 2.0 * vm + v0
    e0 = vmm - 4.0 * vm + 3.0 * v0
    d1 = vm - 2.0 * v0 + vp
    e1 = vm - vp
    d2 = v0 - 2.0 * vp + vpp
    e2 = 3.0 * v0 - 4.0 * vp + vpp
    b0 = 13.0 / 12.0 * d0 * d0 + 0.25 * e0 * e0
    b1 = 13.0 / 12.0 * d1 * d1 + 0.25 * e1 * e1
    b2 = 13.0 / 12.0 * d2 * d2 + 0.25 * e2 * e2
    a0 = 0.1 / ((eps + b0) * (eps + b0))
    a1 = 0.6 / ((eps + b1) * (eps + b1))
    a2 = 0.3 / ((eps + b2) * (eps + b2))
    q0 = vmm / 3.0 - 7.0 / 6.0 * vm + 11.0 / 6.0 * v0
    q1 = -vm / 6.0 + 5.0 / 6.0 * v0 + vp / 3.0
    q2 = v0 / 3.0 + 5.0 / 6.0 * vp - vpp / 6.0
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


@_inline
def _split3(um, u0, u1, u2, fm, f0, f1, f2, alpha, eps):
    # F_{i+1/2} from nodes i-1..i+2: WENO(f+) from the left, WENO(f-) from the right
    return (_weno3_face(0.5 * (fm + alpha * um), 0.5 * (f0 + alpha * u0),
                        0.5 * (f1 + alpha * u1), eps)
            + _weno3_face(0.5 * (f2 - alpha * u2), 0.5 * (f1 - alpha * u1),
                          0.5 * (f0 - alpha * u0), eps))


@_inline
def _split5(umm, um, u0, u1, u2, u3, fmm, fm, f0, f1, f2, f3, alpha, eps):
    # F_{i+1/2} from nodes i-2..i+3
    return (_weno5_face(0.5 * (fmm + alpha * umm), 0.5 * (fm + alpha * um),
                        0.5 * (f0 + alpha * u0), 0.5 * (f1 + alpha * u1),
                        0.5 * (f2 + alpha * u2), eps)
            + _weno5_face(0.5 * (f3 - alpha * u3), 0.5 * (f2 - alpha * u2),
                          0.5 * (f1 - alpha * u1), 0.5 * (f0 - alpha * u0),
                          0.5 * (fm - alpha * um), eps))


@_inline
def _weno_flux(u, f, alpha, i, st, kind, eps):
    # single face F_{i+1/2}; used where only scattered faces are needed
    if kind == WENO3:
        return _split3(u[i - st], u[i], u[i + st], u[i + 2 * st],
                       f[i - st], f[i], f[i + st], f[i + 2 * st], alpha, eps)
    return _split5(u[i - 2 * st], u[i - st], u[i], u[i + st], u[i + 2 * st], u[i + 3 * st],
                   f[i - 2 * st], f[i - st], f[i], f[i + st], f[i + 2 * st], f[i + 3 * st],
                   alpha, eps)


@_jit
def _weno_faces(u, f, alpha, start, m, st, kind, eps, out):
    """out[k] = F at flat face index start + k for k < m."""
    if kind == WENO3:
        um, u0, u1, u2 = (u[start - st:start - st + m], u[start:start + m],
                          u[start + st:start + st + m], u[start + 2 * st:start + 2 * st + m])
        fm, f0, f1, f2 = (f[start - st:start - st + m], f[start:start + m],
                          f[start + st:start + st + m], f[start + 2 * st:start + 2 * st + m])
        for k in range(m):
            out[k] = _split3(um[k], u0[k], u1[k], u2[k], fm[k], f0[k], f1[k], f2[k], alpha, eps)
        return
    lo = start - 2 * st
    umm, um, u0 = u[lo:lo + m], u[lo + st:lo + st + m], u[lo + 2 * st:lo + 2 * st + m]
    u1, u2, u3 = (u[lo + 3 * st:lo + 3 * st + m], u[lo + 4 * st:lo + 4 * st + m],
                  u[lo + 5 * st:lo + 5 * st + m])
    fmm, fm, f0 = f[lo:lo + m], f[lo + st:lo + st + m], f[lo + 2 * st:lo + 2 * st + m]
    f1, f2, f3 = (f[lo + 3 * st:lo + 3 * st + m], f[lo + 4 * st:lo + 4 * st + m],
                  f[lo + 5 * st:lo + 5 * st + m])
    for k in range(m):
        out[k] = _split5(umm[k], um[k], u0[k], u1[k], u2[k], u3[k],
                         fmm[k], fm[k], f0[k], f1[k], f2[k], f3[k], alpha, eps)


@_jit
def _bsqi_faces(f, start, m, st, kind, out):
    """BSQI interface fluxes at flat face indices start .. start + m - 1."""
    if kind == CBSQI:
        fm, f0 = f[start - st:start - st + m], f[start:start + m]
        f1, f2 = f[start + st:start + st + m], f[start + 2 * st:start + 2 * st + m]
        for k in range(m):
            out[k] = (-fm[k] + 7.0 * f0[k] + 7.0 * f1[k] - f2[k]) / 12.0
        return
    lo = start - 3 * st
    a0, a1, a2, a3 = (f[lo:lo + m], f[lo + st:lo + st + m], f[lo + 2 * st:lo + 2 * st + m],
                      f[lo + 3 * st:lo + 3 * st + m])
    a4, a5, a6, a7 = (f[lo + 4 * st:lo + 4 * st + m], f[lo + 5 * st:lo + 5 * st + m],
                      f[lo + 6 * st:lo + 6 * st + m], f[lo + 7 * st:lo + 7 * st + m])
    for k in range(m):
        out[k] = (13.0 * (a0[k] + a7[k]) + 31.0 * (a1[k] + a6[k])
                  - 651.0 * (a2[k] + a5[k]) + 3487.0 * (a3[k] + a4[k])) / 5760.0


@_jit
def _bsqi_differences(f, start, m, st, kind, scale, out):
    """out[k] = scale * (F_{i+1/2} - F_{i-1/2}) at flat node i = start + k,
    written out as the derivative stencil."""
    if kind == CBSQI:
        lo = start - 2 * st
        a0, a1 = f[lo:lo + m], f[lo + st:lo + st + m]
        a3, a4 = f[lo + 3 * st:lo + 3 * st + m], f[lo + 4 * st:lo + 4 * st + m]
        c = scale / 12.0
        for k in range(m):
            out[k] = c * ((a0[k] - a4[k]) + 8.0 * (a3[k] - a1[k]))
        return
    lo = start - 4 * st
    a0, a1, a2, a3 = (f[lo:lo + m], f[lo + st:lo + st + m], f[lo + 2 * st:lo + 2 * st + m],
                      f[lo + 3 * st:lo + 3 * st + m])
    a5, a6, a7, a8 = (f[lo + 5 * st:lo + 5 * st + m], f[lo + 6 * st:lo + 6 * st + m],
                      f[lo + 7 * st:lo + 7 * st + m], f[lo + 8 * st:lo + 8 * st + m])
    c = scale / 5760.0
    for k in range(m):
        out[k] = c * (13.0 * (a8[k] - a0[k]) + 18.0 * (a7[k] - a1[k])
                      + 682.0 * (a2[k] - a6[k]) + 4138.0 * (a5[k] - a3[k]))


@_jit
def interface_fluxes(u, f, alpha, kind, eps, g):
    """F_{j-1/2} for the n+1 faces bounding the n interior nodes."""
    n = u.shape[0] - 2 * g
    p = u.shape[1]
    out = np.empty((n + 1) * p)
    start = (g - 1) * p
    if kind <= QNBSQI:
        _bsqi_faces(f.ravel(), start, (n + 1) * p, p, kind, out)
    else:
        _weno_faces(u.ravel(), f.ravel(), alpha, start, (n + 1) * p, p, kind, eps, out)
    return out.reshape((n + 1, p))


@_jit
def hybrid_rhs(u, f, alpha, flags, dx, smooth_kind, shock_kind, eps, g):
    """Blended right-hand side: WENO flux difference where flags == 1,
    BSQI flux difference elsewhere. WENO fluxes are formed only at the faces
    of flagged nodes."""
    n = u.shape[0] - 2 * g
    p = u.shape[1]
    out = np.empty(n * p)
    rows = _flagged_rows(flags)
    _hybrid_rhs_into(u.ravel(), f.ravel(), alpha, rows, n, p, g, dx,
                     smooth_kind, shock_kind, eps, out)
    return out.reshape((n, p))


@_jit
def _flagged_rows(flags):
    rows = np.empty(flags.shape[0], dtype=np.int64)
    k = 0
    for s in range(flags.shape[0]):
        if flags[s] != 0:
            rows[k] = s
            k += 1
    return rows[:k]


@_jit
def _hybrid_rhs_into(uf, ff, alpha, rows, n, p, g, dx, smooth_kind, shock_kind, eps, out):
    inv = 1.0 / dx
    base = g * p
    if rows.shape[0] == n:
        fw = np.empty((n + 1) * p)
        _weno_faces(uf, ff, alpha, base - p, (n + 1) * p, p, shock_kind, eps, fw)
        lo, hi = fw[:n * p], fw[p:]
        for k in range(n * p):
            out[k] = -(hi[k] - lo[k]) * inv
        return
    _bsqi_differences(ff, base, n * p, p, smooth_kind, -inv, out)
    if rows.shape[0] > 0:
        _weno_rows(uf, ff, alpha, rows, base, p, shock_kind, eps, inv, out)


@_jit
def _weno_rows(uf, ff, alpha, rows, base, p, kind, eps, inv, out):
    """Overwrite out at the listed rows with WENO flux differences."""
    fw_lo = np.empty(p)
    fw_hi = np.empty(p)
    done = -1  # face whose WENO flux sits in fw_hi
    for r in range(rows.shape[0]):
        s = rows[r]
        i = base + s * p
        for c in range(p):
            if done == s:
                fw_lo[c] = fw_hi[c]
            else:
                fw_lo[c] = _weno_flux(uf, ff, alpha, i + c - p, p, kind, eps)
            fw_hi[c] = _weno_flux(uf, ff, alpha, i + c, p, kind, eps)
            out[s * p + c] = -(fw_hi[c] - fw_lo[c]) * inv
        done = s + 1


@_jit
def _wlte_flat(u_prev, u_curr, f_prev, f_curr, dx, dt, g, out):
    n = u_curr.shape[0] - 2 * g
    p = u_curr.shape[1]
    m = n * p
    lo, mid, hi = (g - 1) * p, g * p, (g + 1) * p
    up, uc, fp, fc = u_prev.ravel(), u_curr.ravel(), f_prev.ravel(), f_curr.ravel()
    upm, up0, upp = up[lo:lo + m], up[mid:mid + m], up[hi:hi + m]
    ucm, uc0, ucp = uc[lo:lo + m], uc[mid:mid + m], uc[hi:hi + m]
    fpm, fpp = fp[lo:lo + m], fp[hi:hi + m]
    fcm, fcp = fc[lo:lo + m], fc[hi:hi + m]
    a = dx / 6.0
    b = dt / 4.0
    for k in range(m):
        du = (ucp[k] - upp[k]) + 4.0 * (uc0[k] - up0[k]) + (ucm[k] - upm[k])
        df = (fcp[k] - fcm[k]) + (fpp[k] - fpm[k])
        out[k] = du * a + df * b


@_jit
def wlte(u_prev, u_curr, f_prev, f_curr, dx, dt, g):
    n = u_curr.shape[0] - 2 * g
    p = u_curr.shape[1]
    out = np.empty(n * p)
    _wlte_flat(u_prev, u_curr, f_prev, f_curr, dx, dt, g, out)
    return out.reshape((n, p))


@_jit
def threshold(E, thresh):
    n, p = E.shape
    return _threshold_flat(E.ravel(), n, p, thresh)


@_jit
def _threshold_flat(e, n, p, thresh):
    # flag each entry branch-free, then OR the p components of a row
    hit = np.empty(n * p, dtype=np.int8)
    for k in range(n * p):
        hit[k] = abs(e[k]) > thresh
    out = hit[0:n * p:p].copy()
    for c in range(1, p):
        col = hit[c:n * p:p]
        for s in range(n):
            out[s] |= col[s]
    return out


@_jit
def wlte_flags(u_prev, u_curr, f_prev, f_curr, dx, dt, g, thresh):
    """threshold(wlte(...), thresh) in one pass, without storing E."""
    n = u_curr.shape[0] - 2 * g
    p = u_curr.shape[1]
    m = n * p
    lo, mid, hi = (g - 1) * p, g * p, (g + 1) * p
    up, uc, fp, fc = u_prev.ravel(), u_curr.ravel(), f_prev.ravel(), f_curr.ravel()
    upm, up0, upp = up[lo:lo + m], up[mid:mid + m], up[hi:hi + m]
    ucm, uc0, ucp = uc[lo:lo + m], uc[mid:mid + m], uc[hi:hi + m]
    fpm, fpp = fp[lo:lo + m], fp[hi:hi + m]
    fcm, fcp = fc[lo:lo + m], fc[hi:hi + m]
    a = dx / 6.0
    b = dt / 4.0
    hit = np.empty(m, dtype=np.int8)
    for k in range(m):
        du = (ucp[k] - upp[k]) + 4.0 * (uc0[k] - up0[k]) + (ucm[k] - upm[k])
        df = (fcp[k] - fcm[k]) + (fpp[k] - fpm[k])
        hit[k] = abs(du * a + df * b) > thresh
    if p == 1:
        return hit
    out = hit[0:m:p].copy()
    for c in range(1, p):
        col = hit[c:m:p]
        for s in range(n):
            out[s] |= col[s]
    return out


@_jit
def dilate(flags, M, periodic):
    n = flags.shape[0]
    out = np.zeros(n, dtype=np.int8)
    for s in range(n):
        if flags[s] != 0:
            for k in range(s - M, s + M + 1):
                if periodic:
                    out[k % n] = 1
                elif 0 <= k < n:
                    out[k] = 1
    return out


@_jit
def rk_stage(out, base, prev, L, a, b, dt, g):
    """out = a*base + b*(prev + dt*L) on the non-ghost rows."""
    n, p = L.shape
    m = n * p
    off = g * p
    o = out.ravel()[off:off + m]
    x = base.ravel()[off:off + m]
    y = prev.ravel()[off:off + m]
    z = L.ravel()
    for k in range(m):
        o[k] = a * x[k] + b * (y[k] + dt * z[k])


@_jit
def euler_flux(q, gamma):
    out = np.empty((q.shape[0], 3))
    _euler_flux_into(q, gamma, out)
    return out


@_jit
def _euler_flux_into(q, gamma, out):
    for i in range(q.shape[0]):
        rho, mom, e = q[i, 0], q[i, 1], q[i, 2]
        u = mom / rho
        p = (gamma - 1.0) * (e - 0.5 * mom * u)
        out[i, 0] = mom
        out[i, 1] = mom * u + p
        out[i, 2] = u * (e + p)


@_fast
def euler_speed(q, gamma):
    # fastmath lets the max reduction vectorise; the result is unaffected
    best = 0.0
    for i in range(q.shape[0]):
        rho, mom, e = q[i, 0], q[i, 1], q[i, 2]
        u = mom / rho
        p = (gamma - 1.0) * (e - 0.5 * mom * u)
        best = max(best, abs(u) + np.sqrt(gamma * abs(p) / rho))
    return best


@_jit
def burgers_flux(u):
    uf = u.ravel()
    out = np.empty(uf.shape[0])
    for i in range(uf.shape[0]):
        out[i] = 0.5 * uf[i] * uf[i]
    return out.reshape(u.shape)


@_jit
def burgers_speed(u):
    best = 0.0
    for v in u.ravel():
        best = max(best, abs(v))
    return best


@_jit
def bl_flux(u):
    uf = u.ravel()
    out = np.empty(uf.shape[0])
    for i in range(uf.shape[0]):
        v = uf[i]
        out[i] = v * v / (v * v + (1.0 - v) * (1.0 - v))
    return out.reshape(u.shape)


@_jit
def bl_derivative(u):
    uf = u.ravel()
    out = np.empty(uf.shape[0])
    for i in range(uf.shape[0]):
        v = uf[i]
        d = v * v + (1.0 - v) * (1.0 - v)
        out[i] = 2.0 * v * (1.0 - v) / (d * d)
    return out.reshape(u.shape)


@_jit
def bl_speed(u):
    best = 0.0
    lo, hi = np.inf, -np.inf
    for v in u.ravel():
        d = v * v + (1.0 - v) * (1.0 - v)
        best = max(best, abs(2.0 * v * (1.0 - v) / (d * d)))
        lo = min(lo, v)
        hi = max(hi, v)
    if lo <= 0.5 <= hi:
        best = max(best, 2.0)
    return best


# -- fused SSP-RK3 step for the built-in fluxes ------------------------------------

@_jit
def flux_into(u, flux_id, gamma, out):
    """out = f(u) for a built-in flux id."""
    if flux_id == EULER:
        _euler_flux_into(u, gamma, out)
        return
    uf = u.ravel()
    of = out.ravel()
    for i in range(uf.shape[0]):
        v = uf[i]
        if flux_id == ADVECTION:
            of[i] = v
        elif flux_id == BURGERS:
            of[i] = 0.5 * v * v
        elif flux_id == BUCKLEY_LEVERETT:
            of[i] = v * v / (v * v + (1.0 - v) * (1.0 - v))
        elif v < 0.5:
            of[i] = 0.25 * v * (1.0 - v)
        else:
            of[i] = 0.5 * v * v - 0.5 * v + 3.0 / 16.0


@_jit
def speed_of(u, flux_id, gamma):
    if flux_id == ADVECTION:
        return 1.0
    if flux_id == BURGERS:
        return burgers_speed(u)
    if flux_id == BUCKLEY_LEVERETT:
        return bl_speed(u)
    if flux_id == EULER:
        return euler_speed(u, gamma)
    best = 0.0
    for v in u.ravel():
        best = max(best, abs(0.25 * (1.0 - 2.0 * v)) if v < 0.5 else abs(v - 0.5))
    return best


@_jit
def apply_bc_code(v, g, code, left, right):
    """Ghost fill: 0 periodic with duplicated endpoint, 1 periodic, 2 transmissive, 3 fixed."""
    n = v.shape[0]
    last = n - g - 1
    for k in range(g):
        if code == 0:
            v[k] = v[last - g + k]
            v[last + 1 + k] = v[g + 1 + k]
        elif code == 1:
            v[k] = v[last - g + 1 + k]
            v[last + 1 + k] = v[g + k]
        elif code == 2:
            v[k] = v[g]
            v[last + 1 + k] = v[last]
        else:
            v[k] = left
            v[last + 1 + k] = right


@_jit
def hybrid_step(v0, f0, dt, flags, alpha, dx, smooth_kind, shock_kind, eps, g,
                bc_code, left, right, flux_id, gamma):
    """One SSP-RK3 step of the blended scheme with flags frozen across stages.

    ``v0`` has filled ghosts and ``f0 = f(v0)``. Returns the new state with
    filled ghosts, its flux, its maximum wave speed and whether it is finite.
    """
    n = v0.shape[0] - 2 * g
    p = v0.shape[1]
    rows = _flagged_rows(flags)
    L = np.empty(n * p)
    f = np.empty_like(v0)
    L2 = L.reshape((n, p))
    v1 = np.empty_like(v0)
    _hybrid_rhs_into(v0.ravel(), f0.ravel(), alpha, rows, n, p, g, dx,
                     smooth_kind, shock_kind, eps, L)
    rk_stage(v1, v0, v0, L2, 0.0, 1.0, dt, g)
    apply_bc_code(v1, g, bc_code, left, right)
    flux_into(v1, flux_id, gamma, f)
    _hybrid_rhs_into(v1.ravel(), f.ravel(), alpha, rows, n, p, g, dx,
                     smooth_kind, shock_kind, eps, L)
    v2 = np.empty_like(v0)
    rk_stage(v2, v0, v1, L2, 0.75, 0.25, dt, g)
    apply_bc_code(v2, g, bc_code, left, right)
    flux_into(v2, flux_id, gamma, f)
    _hybrid_rhs_into(v2.ravel(), f.ravel(), alpha, rows, n, p, g, dx,
                     smooth_kind, shock_kind, eps, L)
    v3 = v1  # v1 is no longer needed
    rk_stage(v3, v0, v2, L2, 1.0 / 3.0, 2.0 / 3.0, dt, g)
    apply_bc_code(v3, g, bc_code, left, right)
    ok = True
    for x in v3.ravel()[g * p:(g + n) * p]:
        if not np.isfinite(x):
            ok = False
            break
    if not ok:
        return v3, f, 0.0, False
    flux_into(v3, flux_id, gamma, f)
    return v3, f, speed_of(v3[g:g + n], flux_id, gamma), True
