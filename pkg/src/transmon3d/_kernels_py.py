"""NumPy reference implementations of the hot loops.

Semantics are shared with ``_kernels.pyx``; the two must agree to rounding.
"""
import math

import numpy as np


def ou_coefficients(h, sigma, tau_c):
    """Transition coefficients for one exact step of an OU process and its integral.

    Returns ``(a, sx, m_int, c1, c2)`` such that, with independent standard
    normals z1, z2::

        x'  = a x + sx z1
        int = m_int x + c1 z1 + c2 z2
    """
    u = h / tau_c
    em = math.expm1(-u)
    a = 1.0 + em
    var_x = sigma * sigma * (-em) * (2.0 - (-em))  # 1 - a^2
    cov = sigma * sigma * tau_c * em * em  # sigma^2 tau (1 - a)^2
    if u < 1e-4:
        core = u ** 3 * (2.0 / 3.0) - u ** 4 * 0.5
    else:
        core = 2.0 * (u + em) - em * em  # 2u - 3 + 4a - a^2
    var_i = sigma * sigma * tau_c * tau_c * core
    m_int = -tau_c * em
    if var_x <= 0.0:
        return a, 0.0, m_int, 0.0, math.sqrt(max(var_i, 0.0))
    sx = math.sqrt(var_x)
    c1 = cov / sx
    c2 = math.sqrt(max(var_i - c1 * c1, 0.0))
    return a, sx, m_int, c1, c2


def ou_integrals(x0, normals, h, sigma, tau_c):
    """Integrated OU increments over ``S`` steps of width ``h`` for each path.

    ``x0`` has shape (B,), ``normals`` shape (B, S, 2). Returns the per-step
    integrals (B, S) and the final process values (B,).
    """
    a, sx, m_int, c1, c2 = ou_coefficients(h, sigma, tau_c)
    x = np.array(x0, dtype=float, copy=True)
    n_steps = normals.shape[1]
    out = np.empty((x.shape[0], n_steps))
    for k in range(n_steps):
        z1 = normals[:, k, 0]
        z2 = normals[:, k, 1]
        out[:, k] = m_int * x + c1 * z1 + c2 * z2
        x = a * x + sx * z1
    return out, x


def _rhs(rho, hamiltonian, nd, nd2, dmp_diag, dmp_shift, delta, gamma1, gamma_phi):
    out = -1j * (hamiltonian @ rho - rho @ hamiltonian)
    if delta is not None:
        out -= 1j * delta[:, None, None] * nd * rho
    if gamma1:
        out -= gamma1 * dmp_diag * rho
        out[:, :-1, :-1] += gamma1 * dmp_shift * rho[:, 1:, 1:]
    if gamma_phi:
        out -= gamma_phi * nd2 * rho
    return out


def lindblad_rk4(rho, hamiltonian, number, detunings, n_steps, gamma1, gamma_phi, dt):
    """Fixed-step RK4 for a batch of density matrices.

    Generator: ``-i[H + delta_b(t) N, rho] + gamma1 D[a] rho + 2 gamma_phi D[N] rho``
    with ``N = diag(number)`` and ``a`` the truncated harmonic lowering operator.
    ``detunings`` (B, n_steps) are piecewise constant over each step, or None.
    Rates and ``hamiltonian`` are angular (rad/s); ``dt`` in seconds.
    """
    rho = np.array(rho, dtype=complex, copy=True)
    d = rho.shape[-1]
    number = np.asarray(number, dtype=float)
    nd = number[:, None] - number[None, :]
    nd2 = nd * nd
    idx = np.arange(d, dtype=float)
    dmp_diag = 0.5 * (idx[:, None] + idx[None, :])
    dmp_shift = np.sqrt(np.outer(idx[1:], idx[1:]))
    hamiltonian = np.asarray(hamiltonian, dtype=complex)
    args = (hamiltonian, nd, nd2, dmp_diag, dmp_shift)
    for k in range(n_steps):
        delta = None if detunings is None else detunings[:, k]
        k1 = _rhs(rho, *args, delta, gamma1, gamma_phi)
        k2 = _rhs(rho + 0.5 * dt * k1, *args, delta, gamma1, gamma_phi)
        k3 = _rhs(rho + 0.5 * dt * k2, *args, delta, gamma1, gamma_phi)
        k4 = _rhs(rho + dt * k3, *args, delta, gamma1, gamma_phi)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return rho
