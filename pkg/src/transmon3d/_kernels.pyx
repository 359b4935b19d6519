# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the hot loops in ``_kernels_py``."""
import numpy as np
from libc.math cimport sqrt

from ._kernels_py import ou_coefficients

DEF MAXD = 4


def ou_integrals(x0, normals, double h, double sigma, double tau_c):
    a_, sx_, m_, c1_, c2_ = ou_coefficients(h, sigma, tau_c)
    cdef double a = a_, sx = sx_, m_int = m_, c1 = c1_, c2 = c2_
    cdef double[::1] xv = np.array(x0, dtype=np.float64, copy=True)
    cdef const double[:, :, ::1] z = np.ascontiguousarray(normals, dtype=np.float64)
    cdef Py_ssize_t nb = z.shape[0], ns = z.shape[1], b, k
    out = np.empty((nb, ns), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double x
    with nogil:
        for b in range(nb):
            x = xv[b]
            for k in range(ns):
                o[b, k] = m_int * x + c1 * z[b, k, 0] + c2 * z[b, k, 1]
                x = a * x + sx * z[b, k, 0]
            xv[b] = x
    return out, np.asarray(xv)


cdef inline void _rhs(int d, double[MAXD][MAXD] rr, double[MAXD][MAXD] ri,
                      double[MAXD][MAXD] hr, double[MAXD][MAXD] hi,
                      double[MAXD][MAXD] nd, double[MAXD][MAXD] dec, double[MAXD][MAXD] shf,
                      double delta, double[MAXD][MAXD] outr, double[MAXD][MAXD] outi) noexcept nogil:
    # out = -i([H, r] + delta [N, r]) - dec * r + shf * r[j+1, k+1]
    cdef int j, k, m
    cdef double cr, ci
    for j in range(d):
        for k in range(d):
            cr = 0.0
            ci = 0.0
            for m in range(d):
                cr += hr[j][m] * rr[m][k] - hi[j][m] * ri[m][k] - rr[j][m] * hr[m][k] + ri[j][m] * hi[m][k]
                ci += hr[j][m] * ri[m][k] + hi[j][m] * rr[m][k] - rr[j][m] * hi[m][k] - ri[j][m] * hr[m][k]
            cr += delta * nd[j][k] * rr[j][k]
            ci += delta * nd[j][k] * ri[j][k]
            outr[j][k] = ci - dec[j][k] * rr[j][k]
            outi[j][k] = -cr - dec[j][k] * ri[j][k]
            if j < d - 1 and k < d - 1:
                outr[j][k] += shf[j][k] * rr[j + 1][k + 1]
                outi[j][k] += shf[j][k] * ri[j + 1][k + 1]


def lindblad_rk4(rho, hamiltonian, number, detunings, Py_ssize_t n_steps,
                 double gamma1, double gamma_phi, double dt):
    result = np.array(rho, dtype=np.complex128, copy=True, order="C")
    cdef double complex[:, :, ::1] rv = result
    cdef Py_ssize_t nb = rv.shape[0]
    cdef int d = rv.shape[1]
    if d > MAXD:
        raise ValueError(f"compiled kernel supports dimension <= {MAXD}")
    cdef const double complex[:, ::1] hv = np.ascontiguousarray(hamiltonian, dtype=np.complex128)
    cdef const double[::1] nv = np.ascontiguousarray(number, dtype=np.float64)
    cdef const double[:, ::1] dv
    cdef bint has_det = detunings is not None
    if has_det:
        dv = np.ascontiguousarray(detunings, dtype=np.float64)
    cdef double[MAXD][MAXD] hr, hi, nd, dec, shf
    cdef double[MAXD][MAXD] rr, ri, tr, ti, k1r, k1i, k2r, k2i, k3r, k3i, k4r, k4i
    cdef int j, k
    cdef Py_ssize_t b, s
    cdef double delta = 0.0
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    for j in range(d):
        for k in range(d):
            hr[j][k] = hv[j, k].real
            hi[j][k] = hv[j, k].imag
            nd[j][k] = nv[j] - nv[k]
            dec[j][k] = gamma1 * 0.5 * (j + k) + gamma_phi * nd[j][k] * nd[j][k]
            shf[j][k] = gamma1 * sqrt(<double>((j + 1) * (k + 1)))
    with nogil:
        for b in range(nb):
            for j in range(d):
                for k in range(d):
                    rr[j][k] = rv[b, j, k].real
                    ri[j][k] = rv[b, j, k].imag
            for s in range(n_steps):
                if has_det:
                    delta = dv[b, s]
                _rhs(d, rr, ri, hr, hi, nd, dec, shf, delta, k1r, k1i)
                for j in range(d):
                    for k in range(d):
                        tr[j][k] = rr[j][k] + h2 * k1r[j][k]
                        ti[j][k] = ri[j][k] + h2 * k1i[j][k]
                _rhs(d, tr, ti, hr, hi, nd, dec, shf, delta, k2r, k2i)
                for j in range(d):
                    for k in range(d):
                        tr[j][k] = rr[j][k] + h2 * k2r[j][k]
                        ti[j][k] = ri[j][k] + h2 * k2i[j][k]
                _rhs(d, tr, ti, hr, hi, nd, dec, shf, delta, k3r, k3i)
                for j in range(d):
                    for k in range(d):
                        tr[j][k] = rr[j][k] + dt * k3r[j][k]
                        ti[j][k] = ri[j][k] + dt * k3i[j][k]
                _rhs(d, tr, ti, hr, hi, nd, dec, shf, delta, k4r, k4i)
                for j in range(d):
                    for k in range(d):
                        rr[j][k] += h6 * (k1r[j][k] + 2.0 * k2r[j][k] + 2.0 * k3r[j][k] + k4r[j][k])
                        ri[j][k] += h6 * (k1i[j][k] + 2.0 * k2i[j][k] + 2.0 * k3i[j][k] + k4i[j][k])
            for j in range(d):
                for k in range(d):
                    rv[b, j, k] = rr[j][k] + 1j * ri[j][k]
    return result
