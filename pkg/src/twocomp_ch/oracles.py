"""Independently coded reference solvers used as cross-checks.

Nothing here touches the package's grid, kernel or integrator code: the
dispersionless Camassa-Holm equation

    u_t + u u_x = -d/dx (1 - d^2/dx^2)^{-1} (u^2 + u_x^2 / 2)

is discretised from scratch with complex FFTs and its own RK4 loop.  Setting
v = 2 in the two-component system must reproduce it.
"""
import numpy as np


def _wavenumbers(n, L):
    k = np.fft.fftfreq(n, d=2.0 * L / n) * 2.0 * np.pi
    k_odd = k.copy()
    k_odd[n // 2] = 0.0
    return k, k_odd


def ch_rhs(u, L):
    n = len(u)
    k, k_odd = _wavenumbers(n, L)
    uh = np.fft.fft(u)
    u_x = np.fft.ifft(1j * k_odd * uh).real
    p = u * u + 0.5 * u_x * u_x
    return -u * u_x - np.fft.ifft(1j * k_odd / (1.0 + k * k) * np.fft.fft(p)).real


def _trig_eval(u, L, points):
    n = len(u)
    k, _ = _wavenumbers(n, L)
    c = np.fft.fft(u) / n
    x0 = -L
    vals = np.exp(1j * np.outer(np.asarray(points) - x0, k)) @ c
    # the Nyquist term must be a cosine
    nyq = n // 2
    vals -= c[nyq] * np.exp(1j * k[nyq] * (np.asarray(points) - x0))
    vals += c[nyq] * np.cos(k[nyq] * (np.asarray(points) - x0))
    return vals.real


def ch_integrate(u0, L, dt, n_steps, labels=None):
    """RK4 for CH; optionally carries characteristics ``q' = u(t, q)``.

    Returns ``(u, q)`` at ``n_steps * dt``; ``q`` is None without labels.
    """
    u = np.array(u0, dtype=float)
    q = None if labels is None else np.array(labels, dtype=float)
    for _ in range(n_steps):
        k1 = ch_rhs(u, L)
        u2 = u + 0.5 * dt * k1
        k2 = ch_rhs(u2, L)
        u3 = u + 0.5 * dt * k2
        k3 = ch_rhs(u3, L)
        u4 = u + dt * k3
        k4 = ch_rhs(u4, L)
        if q is not None:
            a1 = _trig_eval(u, L, q)
            a2 = _trig_eval(u2, L, q + 0.5 * dt * a1)
            a3 = _trig_eval(u3, L, q + 0.5 * dt * a2)
            a4 = _trig_eval(u4, L, q + dt * a3)
            q = q + dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        u = u + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return u, q
