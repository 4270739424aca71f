"""Pure-Python/numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures, same algorithms; used when the extension is not built or
when ``EMITCORR_PURE_PYTHON`` is set.
"""

import cmath
import math

import numpy as np

ENTROPY_CUTOFF = 1e-12
PROB_CUTOFF = 1e-12

_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = np.array([71 / 57600, 0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
_P = np.array(
    [
        [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0, 0, 0, 0],
        [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
EPS = np.finfo(float).eps


def _rms(v, scale):
    with np.errstate(over="ignore", invalid="ignore"):
        return math.sqrt(float(np.mean(np.abs(v / scale) ** 2)))


def integrate_linear(gen, y0_in, t_out, rtol, atol):
    gen = np.asarray(gen, dtype=complex)
    y = np.array(y0_in, dtype=complex)
    t_out = np.asarray(t_out, dtype=float)
    n = y.size
    n_out = t_out.size
    out = np.zeros((n_out, n), dtype=complex)
    if n_out == 0:
        return out, 0, 0, 0
    t_end = float(t_out[-1])
    k_out = 0
    while k_out < n_out and t_out[k_out] <= 0.0:
        out[k_out] = y
        k_out += 1
    if k_out == n_out:
        return out, 0, 0, 0

    k = np.empty((7, n), dtype=complex)
    k[0] = gen @ y
    scale = atol + rtol * np.abs(y)
    d0 = _rms(y, scale)
    d1 = _rms(k[0], scale)
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    # h == 0 only for overflowing generators; fall through to the underflow exit
    d2 = _rms(gen @ (y + h * k[0]) - k[0], scale) / h if h > 0 else math.inf
    if max(d1, d2) <= 1e-15:
        h_abs = max(1e-6, h * 1e-3)
    else:
        h_abs = (0.01 / max(d1, d2)) ** 0.2
    h = min(100 * h, h_abs)

    t = 0.0
    n_acc = n_rej = 0
    status = 0
    rejected_last = False
    while t < t_end:
        if h < 10 * EPS * max(abs(t), 1.0):
            status = 1
            break
        t_new = t + h
        if t_new >= t_end:
            t_new = t_end
            h = t_end - t
        for s in range(1, 6):
            k[s] = gen @ (y + h * (np.asarray(_A[s]) @ k[:s]))
        y_new = y + h * (_B[:6] @ k[:6])
        k[6] = gen @ y_new
        err = h * (_E @ k)
        en = _rms(err, atol + rtol * np.maximum(np.abs(y), np.abs(y_new)))
        if en <= 1.0:
            while k_out < n_out and t_out[k_out] <= t_new:
                th = (t_out[k_out] - t) / h
                powers = np.array([th, th * th, th**3, th**4])
                out[k_out] = y + h * ((_P @ powers) @ k)
                k_out += 1
            t = t_new
            y = y_new
            k[0] = k[6]
            n_acc += 1
            factor = MAX_FACTOR if en == 0.0 else min(MAX_FACTOR, SAFETY * en**-0.2)
            if rejected_last:
                factor = min(1.0, factor)
            h *= factor
            rejected_last = False
        else:
            h *= max(MIN_FACTOR, SAFETY * en**-0.2)
            n_rej += 1
            rejected_last = True

    if status == 0:
        out[k_out:] = y
    return out, n_acc, n_rej, status


def _branch_entropy(s00, s11, s01):
    p = s00 + s11
    if p < PROB_CUTOFF:
        return 0.0
    half_gap = math.sqrt(0.25 * (s00 - s11) ** 2 + abs(s01) ** 2)
    acc = 0.0
    for lam in (0.5 * p + half_gap, 0.5 * p - half_gap):
        if lam / p > ENTROPY_CUTOFF:
            acc -= lam * math.log2(lam / p)
    return acc


def conditional_entropy(rho, theta, phi):
    r = np.asarray(rho, dtype=complex)
    v0 = math.cos(theta)
    v1 = cmath.exp(1j * phi) * math.sin(theta)
    w1 = v1.conjugate()
    sa = [[0j, 0j], [0j, 0j]]
    ra = [[0j, 0j], [0j, 0j]]
    for x in range(2):
        for y in range(2):
            a, b = complex(r[2 * x, 2 * y]), complex(r[2 * x, 2 * y + 1])
            c, d = complex(r[2 * x + 1, 2 * y]), complex(r[2 * x + 1, 2 * y + 1])
            sa[x][y] = v0 * a * v0 + v0 * b * v1 + w1 * c * v0 + w1 * d * v1
            ra[x][y] = a + d
    sb = [[ra[x][y] - sa[x][y] for y in range(2)] for x in range(2)]
    return _branch_entropy(
        sa[0][0].real, sa[1][1].real, 0.5 * (sa[0][1] + sa[1][0].conjugate())
    ) + _branch_entropy(sb[0][0].real, sb[1][1].real, 0.5 * (sb[0][1] + sb[1][0].conjugate()))


def _branch_entropy_vec(s00, s11, s01):
    p = s00 + s11
    half_gap = np.sqrt(0.25 * (s00 - s11) ** 2 + np.abs(s01) ** 2)
    safe_p = np.where(p < PROB_CUTOFF, 1.0, p)
    acc = np.zeros_like(p)
    for lam in (0.5 * p + half_gap, 0.5 * p - half_gap):
        ratio = lam / safe_p
        keep = ratio > ENTROPY_CUTOFF
        acc -= np.where(keep, lam * np.log2(np.where(keep, ratio, 1.0)), 0.0)
    return np.where(p < PROB_CUTOFF, 0.0, acc)


def conditional_entropy_grid(rho, thetas, phis):
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    th, ph = np.meshgrid(np.asarray(thetas, float), np.asarray(phis, float), indexing="ij")
    v = np.stack([np.cos(th) + 0j, np.exp(1j * ph) * np.sin(th)], axis=-1)
    sa = np.einsum("...c,xcyb,...b->...xy", v.conj(), r, v)
    ra = np.einsum("xbyb->xy", r)
    sb = ra - sa
    total = np.zeros(th.shape)
    for s in (sa, sb):
        total += _branch_entropy_vec(
            s[..., 0, 0].real, s[..., 1, 1].real, 0.5 * (s[..., 0, 1] + s[..., 1, 0].conj())
        )
    return total
