# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: Dormand-Prince integration of a constant linear
generator and measurement-conditioned entropies of two-qubit states.

Must stay numerically interchangeable with ``_fallback``.
"""

import numpy as np

from libc.math cimport sqrt, log2, cos, sin, fabs, pow, fmax, fmin

cdef double ENTROPY_CUTOFF = 1e-12
cdef double PROB_CUTOFF = 1e-12

# Dormand-Prince 5(4) tableau
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40

# continuous extension, rows = stages, columns = powers theta^1..theta^4
cdef double[7][4] P = [
    [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799],
    [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072],
    [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632],
    [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844],
    [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423],
]

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline void matvec(const double complex[:, ::1] m, double complex[::1] x,
                        double complex[::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, n = m.shape[0]
    cdef double complex acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + m[i, j] * x[j]
        out[i] = acc


cdef double rms_norm(double complex[::1] v, double complex[::1] y0, double complex[::1] y1,
                     double rtol, double atol) noexcept nogil:
    cdef Py_ssize_t i, n = v.shape[0]
    cdef double acc = 0.0, sc, a
    for i in range(n):
        sc = atol + rtol * fmax(sqrt(cabs2(y0[i])), sqrt(cabs2(y1[i])))
        a = cabs2(v[i]) / (sc * sc)
        acc += a
    return sqrt(acc / n)


def integrate_linear(const double complex[:, ::1] gen, const double complex[::1] y0_in,
                     const double[::1] t_out, double rtol, double atol):
    """Integrate dy/dt = gen @ y from t = 0, sampling at ascending ``t_out``.

    Returns ``(samples, n_accepted, n_rejected, status)``; status 0 is
    success and 1 signals step-size underflow (samples past the failure
    are left at zero).
    """
    cdef Py_ssize_t n = gen.shape[0], n_out = t_out.shape[0]
    cdef Py_ssize_t i, s, k_out = 0
    out_arr = np.zeros((n_out, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    y_arr = np.array(y0_in, dtype=np.complex128)
    cdef double complex[::1] y = y_arr
    cdef double complex[::1] ynew = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] err = np.empty(n, dtype=np.complex128)
    cdef double complex[:, ::1] k = np.empty((7, n), dtype=np.complex128)
    cdef double t = 0.0, t_end, h, h_abs, d0, d1, d2, en, factor, th, q1, q2, q3, q4, sc, t_new
    cdef double eps = 2.220446049250313e-16
    cdef int n_acc = 0, n_rej = 0, status = 0
    cdef bint rejected_last

    if n_out == 0:
        return out_arr, 0, 0, 0
    t_end = t_out[n_out - 1]

    while k_out < n_out and t_out[k_out] <= 0.0:
        for i in range(n):
            out[k_out, i] = y[i]
        k_out += 1
    if k_out == n_out:
        return out_arr, 0, 0, 0

    # initial step (Hairer, Norsett & Wanner II.4)
    matvec(gen, y, k[0])
    d0 = 0.0
    d1 = 0.0
    for i in range(n):
        sc = atol + rtol * sqrt(cabs2(y[i]))
        d0 += cabs2(y[i]) / (sc * sc)
        d1 += cabs2(k[0, i]) / (sc * sc)
    d0 = sqrt(d0 / n)
    d1 = sqrt(d1 / n)
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    for i in range(n):
        ynew[i] = y[i] + h * k[0, i]
    matvec(gen, ynew, tmp)
    d2 = 0.0
    for i in range(n):
        sc = atol + rtol * sqrt(cabs2(y[i]))
        d2 += cabs2(tmp[i] - k[0, i]) / (sc * sc)
    d2 = sqrt(d2 / n) / h
    if fmax(d1, d2) <= 1e-15:
        h_abs = fmax(1e-6, h * 1e-3)
    else:
        h_abs = pow(0.01 / fmax(d1, d2), 1.0 / 5)
    h = fmin(100 * h, h_abs)

    rejected_last = False
    while t < t_end:
        if h < 10 * eps * fmax(fabs(t), 1.0):
            status = 1
            break
        t_new = t + h
        if t_new >= t_end:
            t_new = t_end
            h = t_end - t

        for i in range(n):
            tmp[i] = y[i] + h * (A21 * k[0, i])
        matvec(gen, tmp, k[1])
        for i in range(n):
            tmp[i] = y[i] + h * (A31 * k[0, i] + A32 * k[1, i])
        matvec(gen, tmp, k[2])
        for i in range(n):
            tmp[i] = y[i] + h * (A41 * k[0, i] + A42 * k[1, i] + A43 * k[2, i])
        matvec(gen, tmp, k[3])
        for i in range(n):
            tmp[i] = y[i] + h * (A51 * k[0, i] + A52 * k[1, i] + A53 * k[2, i] + A54 * k[3, i])
        matvec(gen, tmp, k[4])
        for i in range(n):
            tmp[i] = y[i] + h * (A61 * k[0, i] + A62 * k[1, i] + A63 * k[2, i]
                                 + A64 * k[3, i] + A65 * k[4, i])
        matvec(gen, tmp, k[5])
        for i in range(n):
            ynew[i] = y[i] + h * (B1 * k[0, i] + B3 * k[2, i] + B4 * k[3, i]
                                  + B5 * k[4, i] + B6 * k[5, i])
        matvec(gen, ynew, k[6])
        for i in range(n):
            err[i] = h * (E1 * k[0, i] + E3 * k[2, i] + E4 * k[3, i]
                          + E5 * k[4, i] + E6 * k[5, i] + E7 * k[6, i])
        en = rms_norm(err, y, ynew, rtol, atol)

        if en <= 1.0:
            # emit samples inside (t, t + h]
            while k_out < n_out and t_out[k_out] <= t_new:
                th = (t_out[k_out] - t) / h
                q1 = th
                q2 = th * th
                q3 = q2 * th
                q4 = q3 * th
                for i in range(n):
                    out[k_out, i] = y[i]
                    for s in range(7):
                        out[k_out, i] = out[k_out, i] + h * k[s, i] * (
                            P[s][0] * q1 + P[s][1] * q2 + P[s][2] * q3 + P[s][3] * q4)
                k_out += 1
            t = t_new
            for i in range(n):
                y[i] = ynew[i]
                k[0, i] = k[6, i]
            n_acc += 1
            if en == 0.0:
                factor = MAX_FACTOR
            else:
                factor = fmin(MAX_FACTOR, SAFETY * pow(en, -0.2))
            if rejected_last:
                factor = fmin(1.0, factor)
            h = h * factor
            rejected_last = False
        else:
            h = h * fmax(MIN_FACTOR, SAFETY * pow(en, -0.2))
            n_rej += 1
            rejected_last = True

    if status == 0:
        while k_out < n_out:
            for i in range(n):
                out[k_out, i] = y[i]
            k_out += 1
    return out_arr, n_acc, n_rej, status


cdef inline double branch_entropy(double s00, double s11, double complex s01) noexcept nogil:
    """p * S(sigma / p) for an unnormalized 2x2 Hermitian block, in bits."""
    cdef double p = s00 + s11
    cdef double half_gap, l1, l2, acc = 0.0
    if p < PROB_CUTOFF:
        return 0.0
    half_gap = sqrt(0.25 * (s00 - s11) * (s00 - s11) + cabs2(s01))
    l1 = 0.5 * p + half_gap
    l2 = 0.5 * p - half_gap
    if l1 / p > ENTROPY_CUTOFF:
        acc -= l1 * log2(l1 / p)
    if l2 / p > ENTROPY_CUTOFF:
        acc -= l2 * log2(l2 / p)
    return acc


cdef double cond_entropy_b(const double complex[:, ::1] rho, double theta, double phi) noexcept nogil:
    # |a> = cos(theta)|0> + e^{i phi} sin(theta)|1> on qubit B;
    # sigma_a[x, y] = sum_{c, b} conj(v_c) rho[2x + c, 2y + b] v_b, sigma_b = rho_A - sigma_a
    cdef double complex v0 = cos(theta)
    cdef double complex v1 = (cos(phi) + 1j * sin(phi)) * sin(theta)
    cdef double complex w0 = v0.conjugate(), w1 = v1.conjugate()
    cdef double complex sa[2][2]
    cdef double complex ra[2][2]
    cdef int x, y
    for x in range(2):
        for y in range(2):
            sa[x][y] = (w0 * rho[2 * x, 2 * y] * v0 + w0 * rho[2 * x, 2 * y + 1] * v1
                        + w1 * rho[2 * x + 1, 2 * y] * v0 + w1 * rho[2 * x + 1, 2 * y + 1] * v1)
            ra[x][y] = rho[2 * x, 2 * y] + rho[2 * x + 1, 2 * y + 1]
    return (branch_entropy(sa[0][0].real, sa[1][1].real, 0.5 * (sa[0][1] + sa[1][0].conjugate()))
            + branch_entropy((ra[0][0] - sa[0][0]).real, (ra[1][1] - sa[1][1]).real,
                             0.5 * (ra[0][1] - sa[0][1] + (ra[1][0] - sa[1][0]).conjugate())))


def conditional_entropy(const double complex[:, ::1] rho, double theta, double phi):
    """Average entropy of qubit A after projecting qubit B onto the (theta, phi) basis."""
    return cond_entropy_b(rho, theta, phi)


def conditional_entropy_grid(const double complex[:, ::1] rho, const double[::1] thetas,
                             const double[::1] phis):
    cdef Py_ssize_t i, j, nt = thetas.shape[0], nph = phis.shape[0]
    out_arr = np.empty((nt, nph), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(nt):
            for j in range(nph):
                out[i, j] = cond_entropy_b(rho, thetas[i], phis[j])
    return out_arr
