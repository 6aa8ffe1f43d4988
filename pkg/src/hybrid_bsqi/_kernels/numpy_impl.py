"""Vectorised numpy versions of the loop kernels (no numba required)."""

import numpy as np

CBSQI, QNBSQI, WENO3, WENO5 = 0, 1, 2, 3
ADVECTION, BURGERS, BUCKLEY_LEVERETT, NONCONVEX, EULER = 0, 1, 2, 3, 4
FLUX_IDS = {"advection": ADVECTION, "burgers": BURGERS, "buckley_leverett": BUCKLEY_LEVERETT,
            "nonconvex": NONCONVEX, "euler": EULER}


def _weno3_face(vm, v0, vp, eps):
    a0 = (1.0 / 3.0) / (eps + (v0 - vm) ** 2) ** 2
    a1 = (2.0 / 3.0) / (eps + (vp - v0) ** 2) ** 2
    return (a0 * (-0.5 * vm + 1.5 * v0) + a1 * (0.5 * v0 + 0.5 * vp)) / (a0 + a1)


def _weno5_face(vmm, vm, v0, vp, vpp, eps):
    b0 = 13.0 / 12.0 * (vmm - 2.0 * vm + v0) ** 2 + 0.25 * (vmm - 4.0 * vm + 3.0 * v0) ** 2
    b1 = 13.0 / 12.0 * (vm - 2.0 * v0 + vp) ** 2 + 0.25 * (vm - vp) ** 2
    b2 = 13.0 / 12.0 * (v0 - 2.0 * vp + vpp) ** 2 + 0.25 * (3.0 * v0 - 4.0 * vp + vpp) ** 2
    a0 = 0.1 / (eps + b0) ** 2
    a1 = 0.6 / (eps + b1) ** 2
    a2 = 0.3 / (eps + b2) ** 2
    q0 = vmm / 3.0 - 7.0 / 6.0 * vm + 11.0 / 6.0 * v0
    q1 = -vm / 6.0 + 5.0 / 6.0 * v0 + vp / 3.0
    q2 = v0 / 3.0 + 5.0 / 6.0 * vp - vpp / 6.0
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


def _bsqi_faces(f, idx, kind):
    if kind == CBSQI:
        return (-f[idx - 1] + 7.0 * f[idx] + 7.0 * f[idx + 1] - f[idx + 2]) / 12.0
    return (13.0 * (f[idx - 3] + f[idx + 4]) + 31.0 * (f[idx - 2] + f[idx + 3])
            - 651.0 * (f[idx - 1] + f[idx + 2]) + 3487.0 * (f[idx] + f[idx + 1])) / 5760.0


def _weno_faces(u, f, alpha, idx, kind, eps):
    fp = 0.5 * (f + alpha * u)
    fm = 0.5 * (f - alpha * u)
    if kind == WENO3:
        return (_weno3_face(fp[idx - 1], fp[idx], fp[idx + 1], eps)
                + _weno3_face(fm[idx + 2], fm[idx + 1], fm[idx], eps))
    return (_weno5_face(fp[idx - 2], fp[idx - 1], fp[idx], fp[idx + 1], fp[idx + 2], eps)
            + _weno5_face(fm[idx + 3], fm[idx + 2], fm[idx + 1], fm[idx], fm[idx - 1], eps))


def _faces(n, g):
    return np.arange(g - 1, g + n)


def interface_fluxes(u, f, alpha, kind, eps, g):
    n = u.shape[0] - 2 * g
    idx = _faces(n, g)
    if kind <= QNBSQI:
        return _bsqi_faces(f, idx, kind)
    return _weno_faces(u, f, alpha, idx, kind, eps)


def _bsqi_differences(f, rows, kind):
    if kind == CBSQI:
        return (f[rows - 2] - 8.0 * f[rows - 1] + 8.0 * f[rows + 1] - f[rows + 2]) / 12.0
    return (-13.0 * (f[rows - 4] - f[rows + 4]) - 18.0 * (f[rows - 3] - f[rows + 3])
            + 682.0 * (f[rows - 2] - f[rows + 2])
            - 4138.0 * (f[rows - 1] - f[rows + 1])) / 5760.0


def hybrid_rhs(u, f, alpha, flags, dx, smooth_kind, shock_kind, eps, g):
    n = u.shape[0] - 2 * g
    p = u.shape[1]
    flagged = flags.astype(bool)
    out = np.empty((n, p))
    rows = np.arange(g, g + n)
    smooth = ~flagged
    if smooth.any():
        out[smooth] = -_bsqi_differences(f, rows[smooth], smooth_kind) / dx
    if flagged.any():
        # faces j-1/2 and j+1/2 of every flagged node
        face = np.zeros(n + 1, dtype=bool)
        face[:-1] |= flagged
        face[1:] |= flagged
        fw = np.zeros((n + 1, p))
        fw[face] = _weno_faces(u, f, alpha, _faces(n, g)[face], shock_kind, eps)
        out[flagged] = -(fw[1:] - fw[:-1])[flagged] / dx
    return out


def wlte(u_prev, u_curr, f_prev, f_curr, dx, dt, g):
    n = u_curr.shape[0] - 2 * g
    d = u_curr - u_prev
    c = slice(g, g + n)
    lo = slice(g - 1, g + n - 1)
    hi = slice(g + 1, g + n + 1)
    du = d[hi] + 4.0 * d[c] + d[lo]
    df = (f_curr[hi] - f_curr[lo]) + (f_prev[hi] - f_prev[lo])
    return du * dx / 6.0 + df * dt / 4.0


def threshold(E, thresh):
    return (np.abs(E) > thresh).any(axis=1).astype(np.int8)


def dilate(flags, M, periodic):
    flags = np.asarray(flags).astype(bool)
    n = flags.shape[0]
    out = flags.copy()
    for k in range(1, M + 1):
        if periodic:
            out |= np.roll(flags, k) | np.roll(flags, -k)
        else:
            out[k:] |= flags[:n - k] if k < n else False
            out[:n - k] |= flags[k:] if k < n else False
    return out.astype(np.int8)


def rk_stage(out, base, prev, L, a, b, dt, g):
    n = L.shape[0]
    out[g:g + n] = a * base[g:g + n] + b * (prev[g:g + n] + dt * L)


def euler_flux(q, gamma):
    rho, mom, e = q[:, 0], q[:, 1], q[:, 2]
    u = mom / rho
    p = (gamma - 1.0) * (e - 0.5 * mom * u)
    out = np.empty((q.shape[0], 3))
    out[:, 0] = mom
    out[:, 1] = mom * u + p
    out[:, 2] = u * (e + p)
    return out


def euler_speed(q, gamma):
    rho, mom, e = q[:, 0], q[:, 1], q[:, 2]
    u = mom / rho
    p = (gamma - 1.0) * (e - 0.5 * mom * u)
    return float(np.max(np.abs(u) + np.sqrt(gamma * np.abs(p) / rho)))


def wlte_flags(u_prev, u_curr, f_prev, f_curr, dx, dt, g, thresh):
    return threshold(wlte(u_prev, u_curr, f_prev, f_curr, dx, dt, g), thresh)


def burgers_flux(u):
    return 0.5 * u * u


def burgers_speed(u):
    return float(np.max(np.abs(u)))


def bl_flux(u):
    u2 = u * u
    return u2 / (u2 + (1.0 - u) ** 2)


def bl_derivative(u):
    d = u * u + (1.0 - u) ** 2
    return 2.0 * u * (1.0 - u) / (d * d)


def bl_speed(u):
    # |f'| peaks at u = 1/2 inside [0, 1]; include it when the data straddle it
    speed = float(np.max(np.abs(bl_derivative(u))))
    if np.min(u) <= 0.5 <= np.max(u):
        speed = max(speed, 2.0)
    return speed


def flux_into(u, flux_id, gamma, out):
    if flux_id == ADVECTION:
        out[...] = u
    elif flux_id == BURGERS:
        out[...] = burgers_flux(u)
    elif flux_id == BUCKLEY_LEVERETT:
        out[...] = bl_flux(u)
    elif flux_id == NONCONVEX:
        out[...] = np.where(u < 0.5, 0.25 * u * (1.0 - u), 0.5 * u * u - 0.5 * u + 3.0 / 16.0)
    else:
        out[...] = euler_flux(u, gamma)


def speed_of(u, flux_id, gamma):
    if flux_id == ADVECTION:
        return 1.0
    if flux_id == BURGERS:
        return burgers_speed(u)
    if flux_id == BUCKLEY_LEVERETT:
        return bl_speed(u)
    if flux_id == NONCONVEX:
        return float(np.max(np.abs(np.where(u < 0.5, 0.25 * (1.0 - 2.0 * u), u - 0.5))))
    return euler_speed(u, gamma)


def apply_bc_code(v, g, code, left, right):
    last = v.shape[0] - g - 1
    if code == 0:
        v[:g] = v[last - g:last]
        v[last + 1:] = v[g + 1:2 * g + 1]
    elif code == 1:
        v[:g] = v[last - g + 1:last + 1]
        v[last + 1:] = v[g:2 * g]
    elif code == 2:
        v[:g] = v[g]
        v[last + 1:] = v[last]
    else:
        v[:g] = left
        v[last + 1:] = right


def hybrid_step(v0, f0, dt, flags, alpha, dx, smooth_kind, shock_kind, eps, g,
                bc_code, left, right, flux_id, gamma):
    n = v0.shape[0] - 2 * g
    f = f0
    prev = v0
    for a, b in ((0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)):
        L = hybrid_rhs(prev, f, alpha, flags, dx, smooth_kind, shock_kind, eps, g)
        nxt = np.empty_like(v0)
        rk_stage(nxt, v0, prev, L, a, b, dt, g)
        apply_bc_code(nxt, g, bc_code, left, right)
        f = np.empty_like(v0)
        flux_into(nxt, flux_id, gamma, f)
        prev = nxt
    if not np.all(np.isfinite(prev[g:g + n])):
        return prev, f, 0.0, False
    return prev, f, float(speed_of(prev[g:g + n], flux_id, gamma)), True
