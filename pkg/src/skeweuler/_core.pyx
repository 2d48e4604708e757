# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: banded SBP derivative application and the split-form RHS.

Mirrors the formulas of the numpy backend in skeweuler.kernels; the two are
pinned together by the backend-equivalence tests.
"""

import numpy as np


cdef void _dx_into(double[:, ::1] f, double[:, ::1] out, int periodic,
                   double[::1] c, double[:, ::1] cl, double[:, ::1] cr) noexcept nogil:
    """Derivative along axis 0 of a (n, ny) array."""
    cdef Py_ssize_t n = f.shape[0], ny = f.shape[1]
    cdef Py_ssize_t w = c.shape[0] // 2
    cdef Py_ssize_t r = cl.shape[0], m = cl.shape[1]
    cdef Py_ssize_t i, j, k, idx, lo, hi
    cdef double acc

    if periodic:
        lo = w
        hi = n - w
    else:
        lo = r
        hi = n - r
    for i in range(lo, hi):
        for j in range(ny):
            acc = 0.0
            for k in range(2 * w + 1):
                acc += c[k] * f[i + k - w, j]
            out[i, j] = acc
    if periodic:
        for i in range(w):
            for j in range(ny):
                acc = 0.0
                for k in range(2 * w + 1):
                    idx = i + k - w
                    if idx < 0:
                        idx += n
                    acc += c[k] * f[idx, j]
                out[i, j] = acc
        for i in range(n - w, n):
            for j in range(ny):
                acc = 0.0
                for k in range(2 * w + 1):
                    idx = i + k - w
                    if idx >= n:
                        idx -= n
                    acc += c[k] * f[idx, j]
                out[i, j] = acc
    else:
        for i in range(r):
            for j in range(ny):
                acc = 0.0
                for k in range(m):
                    acc += cl[i, k] * f[k, j]
                out[i, j] = acc
                acc = 0.0
                for k in range(m):
                    acc += cr[i, k] * f[n - m + k, j]
                out[n - r + i, j] = acc


cdef void _dy_into(double[:, ::1] f, double[:, ::1] out, int periodic,
                   double[::1] c, double[:, ::1] cl, double[:, ::1] cr) noexcept nogil:
    """Derivative along axis 1 of a (nx, n) array."""
    cdef Py_ssize_t nx = f.shape[0], n = f.shape[1]
    cdef Py_ssize_t w = c.shape[0] // 2
    cdef Py_ssize_t r = cl.shape[0], m = cl.shape[1]
    cdef Py_ssize_t i, j, k, idx, lo, hi
    cdef double acc

    if periodic:
        lo = w
        hi = n - w
    else:
        lo = r
        hi = n - r
    for i in range(nx):
        for j in range(lo, hi):
            acc = 0.0
            for k in range(2 * w + 1):
                acc += c[k] * f[i, j + k - w]
            out[i, j] = acc
        if periodic:
            for j in range(w):
                acc = 0.0
                for k in range(2 * w + 1):
                    idx = j + k - w
                    if idx < 0:
                        idx += n
                    acc += c[k] * f[i, idx]
                out[i, j] = acc
            for j in range(n - w, n):
                acc = 0.0
                for k in range(2 * w + 1):
                    idx = j + k - w
                    if idx >= n:
                        idx -= n
                    acc += c[k] * f[i, idx]
                out[i, j] = acc
        else:
            for j in range(r):
                acc = 0.0
                for k in range(m):
                    acc += cl[j, k] * f[i, k]
                out[i, j] = acc
                acc = 0.0
                for k in range(m):
                    acc += cr[j, k] * f[i, n - m + k]
                out[i, n - r + j] = acc


def apply_d(double[:, ::1] f, double[:, ::1] out, int periodic,
            double[::1] dcoefs, double[:, ::1] dclose_l, double[:, ::1] dclose_r,
            int axis):
    if axis == 0:
        with nogil:
            _dx_into(f, out, periodic, dcoefs, dclose_l, dclose_r)
    else:
        with nogil:
            _dy_into(f, out, periodic, dcoefs, dclose_l, dclose_r)


def rhs_core(double[:, :, ::1] phi, double[:, :, ::1] out,
             double gamma, double alpha2,
             double a12, double a14, double b13, double b14,
             int xper, double[::1] xc, double[:, ::1] xcl, double[:, ::1] xcr,
             int yper, double[::1] yc, double[:, ::1] ycl, double[:, ::1] ycr):
    """out = -[D_x(A1 phi) + A2 D_x phi + D_y(B1 phi) + B2 D_y phi]."""
    cdef Py_ssize_t nx = phi.shape[1], ny = phi.shape[2]
    cdef Py_ssize_t i, j, cidx
    cdef double p1, p2, p3, p4, u, v, r
    cdef double h1, h2, h3, h4, m1, m2, m3, m4
    cdef double b2 = (gamma - 1.0) / 2.0

    gk = np.empty((4, nx, ny))
    kk = np.empty((4, nx, ny))
    dgx = np.empty((4, nx, ny))
    dky = np.empty((4, nx, ny))
    dpx = np.empty((4, nx, ny))
    dpy = np.empty((4, nx, ny))
    cdef double[:, :, ::1] G = gk, K = kk, DGX = dgx, DKY = dky, DPX = dpx, DPY = dpy

    with nogil:
        for i in range(nx):
            for j in range(ny):
                p1 = phi[0, i, j]
                p2 = phi[1, i, j]
                p3 = phi[2, i, j]
                p4 = phi[3, i, j]
                u = p2 / p1
                v = p3 / p1
                G[0, i, j] = 0.5 * (p2 + (a12 * p2 * p2 + a14 * p4 * p4) / alpha2)
                G[1, i, j] = 0.5 * (u * p2 - (a12 / b2) * p1 * p2)
                G[2, i, j] = 0.5 * (u * p3)
                G[3, i, j] = 0.5 * (gamma * u * p4 - a14 * p1 * p4)
                K[0, i, j] = 0.5 * (p3 + (b13 * p3 * p3 + b14 * p4 * p4) / alpha2)
                K[1, i, j] = 0.5 * (v * p2)
                K[2, i, j] = 0.5 * (v * p3 - (b13 / b2) * p1 * p3)
                K[3, i, j] = 0.5 * (gamma * v * p4 - b14 * p1 * p4)

        for cidx in range(4):
            _dx_into(G[cidx], DGX[cidx], xper, xc, xcl, xcr)
            _dy_into(K[cidx], DKY[cidx], yper, yc, ycl, ycr)
            _dx_into(phi[cidx], DPX[cidx], xper, xc, xcl, xcr)
            _dy_into(phi[cidx], DPY[cidx], yper, yc, ycl, ycr)

        for i in range(nx):
            for j in range(ny):
                p1 = phi[0, i, j]
                p2 = phi[1, i, j]
                p3 = phi[2, i, j]
                p4 = phi[3, i, j]
                u = p2 / p1
                v = p3 / p1
                r = p4 / p1
                h1 = DPX[0, i, j]
                h2 = DPX[1, i, j]
                h3 = DPX[2, i, j]
                h4 = DPX[3, i, j]
                m1 = DPY[0, i, j]
                m2 = DPY[1, i, j]
                m3 = DPY[2, i, j]
                m4 = DPY[3, i, j]
                out[0, i, j] = -(
                    DGX[0, i, j] + DKY[0, i, j]
                    + 0.5 * (u * h1 - (2 * a12 / alpha2) * p2 * h2
                             - (2 * a14 / alpha2) * p4 * h4)
                    + 0.5 * (v * m1 - (2 * b13 / alpha2) * p3 * m3
                             - (2 * b14 / alpha2) * p4 * m4)
                )
                out[1, i, j] = -(
                    DGX[1, i, j] + DKY[1, i, j]
                    + 0.5 * ((a12 / b2) * (p2 * h1 + p1 * h2) + u * h2 + 4 * r * h4)
                    + 0.5 * (v * m2)
                )
                out[2, i, j] = -(
                    DGX[2, i, j] + DKY[2, i, j]
                    + 0.5 * (u * h3)
                    + 0.5 * ((b13 / b2) * (p3 * m1 + p1 * m3) + v * m3 + 4 * r * m4)
                )
                out[3, i, j] = -(
                    DGX[3, i, j] + DKY[3, i, j]
                    + 0.5 * (a14 * (p4 * h1 + p1 * h4) + (2 - gamma) * u * h4)
                    + 0.5 * (b14 * (p4 * m1 + p1 * m4) + (2 - gamma) * v * m4)
                )
