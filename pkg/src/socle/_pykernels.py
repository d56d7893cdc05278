"""Pure-Python/numpy versions of the dense kernels.

Same algorithms and signatures as the compiled ``_ckernels`` module; used
when the extension is not built or ``SOCLE_PURE_PYTHON=1`` is set.
"""
import numpy as np

_EPS = np.finfo(float).eps


def hessenberg(a):
    """Reduce a square complex matrix to upper Hessenberg form in place
    (Householder reflections) and return it."""
    h = np.array(a, dtype=complex, copy=True)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] != 0:
            alpha = -alpha * x[0] / abs(x[0])
        else:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm2 = np.vdot(v, v).real
        if vnorm2 == 0.0:
            continue
        # H <- (I - 2 v v^H / v^H v) H (I - 2 v v^H / v^H v)
        h[k + 1:, k:] -= (2.0 / vnorm2) * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= (2.0 / vnorm2) * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 2:, k] = 0.0
    return h


def _givens(f, g):
    # returns c (real), s (complex) with [c s; -conj(s) c] [f; g] = [r; 0]
    af = abs(f)
    if g == 0:
        return 1.0, 0j
    if af == 0.0:
        return 0.0, np.conj(g) / abs(g)
    norm = np.hypot(af, abs(g))
    c = af / norm
    s = (f / af) * np.conj(g) / norm
    return c, s


def hqr_eigvals(a, max_sweeps):
    """Eigenvalues of a square complex matrix by Hessenberg reduction and
    single-shift (Wilkinson) QR iteration.

    Returns ``(eigs, converged)``; ``max_sweeps`` caps the total number of
    QR steps.
    """
    h = hessenberg(a)
    n = h.shape[0]
    eigs = np.zeros(n, dtype=complex)
    hi = n - 1
    steps = 0
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs[0] = h[0, 0]
            break
        l = hi
        while l > 0:
            s = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if s == 0.0:
                s = np.abs(h[:hi + 1, :hi + 1]).max()
            if abs(h[l, l - 1]) <= _EPS * s:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            eigs[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        if steps >= max_sweeps:
            return eigs, False
        steps += 1
        its += 1
        if its % 11 == 10:
            mu = h[hi, hi] + abs(h[hi, hi - 1]) * (0.75 + 0.5j)
        else:
            p, q = h[hi - 1, hi - 1], h[hi - 1, hi]
            r, t = h[hi, hi - 1], h[hi, hi]
            half = 0.5 * (p - t)
            disc = np.sqrt(half * half + q * r)
            m1, m2 = 0.5 * (p + t) + disc, 0.5 * (p + t) - disc
            mu = m1 if abs(m1 - t) < abs(m2 - t) else m2
        for k in range(l, hi + 1):
            h[k, k] -= mu
        rots = []
        for k in range(l, hi):
            c, s = _givens(h[k, k], h[k + 1, k])
            rk = h[k, k:hi + 1].copy()
            rk1 = h[k + 1, k:hi + 1].copy()
            h[k, k:hi + 1] = c * rk + s * rk1
            h[k + 1, k:hi + 1] = -np.conj(s) * rk + c * rk1
            rots.append((c, s))
        for k, (c, s) in zip(range(l, hi), rots):
            top = min(k + 2, hi) + 1
            ck = h[l:top, k].copy()
            ck1 = h[l:top, k + 1].copy()
            h[l:top, k] = c * ck + np.conj(s) * ck1
            h[l:top, k + 1] = -s * ck + c * ck1
        for k in range(l, hi + 1):
            h[k, k] += mu
    return eigs, True


def pivoted_qr(a):
    """Householder QR with column pivoting: ``a[:, perm] = q @ r``.

    Returns ``(q, r, perm)`` with ``q`` square unitary and ``|r[k, k]|``
    non-increasing.
    """
    r = np.array(a, dtype=complex, copy=True)
    m, n = r.shape
    q = np.eye(m, dtype=complex)
    perm = np.arange(n)
    for k in range(min(m, n)):
        norms = np.einsum("ij,ij->j", r[k:, k:].conj(), r[k:, k:]).real
        j = k + int(np.argmax(norms))
        if j != k:
            r[:, [k, j]] = r[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        x = r[k:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            break
        if x[0] != 0:
            alpha = -alpha * x[0] / abs(x[0])
        else:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm2 = np.vdot(v, v).real
        if vnorm2 == 0.0:
            continue
        r[k:, k:] -= (2.0 / vnorm2) * np.outer(v, v.conj() @ r[k:, k:])
        q[:, k:] -= (2.0 / vnorm2) * np.outer(q[:, k:] @ v, v.conj())
        r[k + 1:, k] = 0.0
    return q, r, perm
