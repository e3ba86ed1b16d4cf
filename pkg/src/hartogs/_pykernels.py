"""Pure numpy implementations of the hot kernels.

Same signatures and semantics as the compiled ``_ckernels`` module; used when
the extension is not built or ``HARTOGS_BACKEND=python`` is set.
"""
import math

import numpy as np

NAME = "python"


def _ipow(x, k):
    out = np.ones_like(x)
    for _ in range(k):
        out = out * x
    return out


def hartogs_kernel(P, Q, n, k, ball):
    """Closed-form Hartogs kernel K(P[i], Q[i]).

    ``P`` may have a single row, which is then paired with every row of
    ``Q``. Returns ``(values, poles)``; entries whose denominator vanishes
    exactly are NaN and counted in ``poles``.
    """
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    eta = P[:, 0] * np.conj(Q[:, 0])
    nu = P[:, 1:] * np.conj(Q[:, 1:])
    etak = _ipow(eta, k)
    one_minus = 1.0 - eta
    if ball:
        gap = etak - nu.sum(axis=1)
        zero = (one_minus == 0) | (gap == 0)
        num = math.factorial(n) * etak
        den = one_minus * one_minus * _ipow(gap, n + 1)
    else:
        gaps = etak[:, None] - nu
        zero = (one_minus == 0) | np.any(gaps == 0, axis=1)
        num = _ipow(etak, n)
        den = one_minus * one_minus * np.prod(gaps * gaps, axis=1)
    den = np.where(zero, 1.0, den) * math.pi ** (n + 1)
    out = np.where(zero, np.nan, num / den)
    return out, int(np.count_nonzero(zero))


def _power_table(x, top):
    row = np.full(top + 1, complex(x))
    row[0] = 1.0
    return np.cumprod(row)


def shell_sum(eta, t, s, beta, weights):
    """Sum ``w * eta**s * prod_j t_j**beta_j`` over one frontier shell.

    Returns the complex sum and the sum of absolute term values.
    """
    s = np.asarray(s, dtype=np.int64)
    beta = np.asarray(beta, dtype=np.int64)
    top = int(max(s.max(initial=0), beta.max(initial=0)))
    terms = np.asarray(weights, dtype=float) * _power_table(eta, top)[s]
    for j, tj in enumerate(np.asarray(t, dtype=complex)):
        terms = terms * _power_table(tj, top)[beta[:, j]]
    return complex(terms.sum()), float(np.abs(terms).sum())
