"""Bergman kernels of the supported domains.

Three independent routes are available for the Hartogs kinds:

* :func:`kernel_closed` evaluates the closed form;
* :func:`kernel_series` sums the orthogonal expansion over the monomial basis;
* :func:`kernel_via_transform` pulls back the product-domain kernel through
  ``phi`` using the biholomorphic transformation law.

With ``eta = z conj(x)`` and ``nu_j = w_j conj(y_j)`` the closed forms are::

    Omega_k:  eta^{nk} / (pi^{n+1} (1-eta)^2 prod_j (eta^k - nu_j)^2)
    H_k:      n! eta^k / (pi^{n+1} (1-eta)^2 (eta^k - nu_1 - ... - nu_n)^{n+1})

The ``n!`` in the H_k kernel comes from the ball kernel ``n!/pi^n``; it is
invisible for ``n = 1`` and confirmed against both other routes for ``n > 1``.
"""
from __future__ import annotations

import math

import numpy as np

from . import _backend
from .basis import frontier_shell
from .domains import (
    DomainSpec, Kind, as_points, contains, phi, phi_jacobian_det,
)
from .errors import ContractViolation, ConvergenceError, PoleError


def _pair(spec, p, q, check):
    P = as_points(spec, p)
    Q = as_points(spec, q)
    if check:
        for name, pts in (("p", P), ("q", Q)):
            if not np.all(contains(spec, pts)):
                raise ContractViolation(f"{name} is not an interior point of {spec}")
    return P, Q


def _ipow(x, k):
    out = np.ones_like(x)
    for _ in range(k):
        out = out * x
    return out


def _elementary_kernel(spec: DomainSpec, P: np.ndarray, Q: np.ndarray) -> np.ndarray:
    """Disc, polydisc and ball kernels on batches (2-D arrays)."""
    n = spec.n
    if spec.kind is Kind.BALL:
        gap = 1.0 - np.sum(P * np.conj(Q), axis=1)
        if np.any(gap == 0):
            raise PoleError(f"1 - <z, x> = 0 for the {spec} kernel")
        return math.factorial(n) / math.pi ** n / _ipow(gap, n + 1)
    gaps = 1.0 - P * np.conj(Q)
    if np.any(gaps == 0):
        raise PoleError(f"1 - z_j conj(x_j) = 0 for the {spec} kernel")
    return 1.0 / (math.pi ** n * np.prod(gaps * gaps, axis=1))


def kernel_closed(spec: DomainSpec, p, q, check: bool = True):
    """Closed-form Bergman kernel ``K(p, q)``.

    ``p`` and ``q`` are single points or batches of equal length; a single
    ``p`` is paired with every row of a batch ``q``. Evaluation is allowed
    arbitrarily close to the boundary; only an exactly vanishing denominator
    raises :class:`PoleError`. Pass ``check=False`` to skip the interior test
    on trusted inputs such as Monte Carlo samples.
    """
    P, Q = _pair(spec, p, q, check)
    scalar = P.ndim == 1 and Q.ndim == 1
    P2, Q2 = np.atleast_2d(P), np.atleast_2d(Q)
    if P2.shape[0] > 1 and Q2.shape[0] == 1:
        Q2 = np.broadcast_to(Q2, P2.shape)
    elif P2.shape[0] not in (1, Q2.shape[0]):
        raise ContractViolation(f"cannot pair {P2.shape[0]} points with {Q2.shape[0]}")
    if spec.is_hartogs:
        if np.any(P2[:, 0] == 0) or np.any(Q2[:, 0] == 0):
            raise PoleError("eta = z conj(x) = 0: the base coordinate vanishes")
        values, poles = _backend.hartogs_kernel(
            P2, np.ascontiguousarray(Q2), spec.n, spec.k, spec.kind is Kind.HARTOGS_BALL)
        if poles:
            raise PoleError(f"{poles} kernel denominator(s) vanish exactly for {spec}")
    else:
        values = _elementary_kernel(spec, np.broadcast_to(P2, Q2.shape), Q2)
    return complex(values[0]) if scalar else values


def kernel_series(spec: DomainSpec, p, q, tol: float = 1e-8,
                  max_shells: int = 500, min_shells: int = 3) -> complex:
    """Truncated orthogonal-series kernel ``sum_m e_m(p) conj(e_m(q)) / ||e_m||^2``.

    Each monomial product factors as ``eta^{-kn} eta^s prod_j (nu_j/eta^k)^{beta_j}``
    with ``s`` the shifted degree, which keeps every partial product bounded.
    Shells ``s + |beta| = N`` are added until a shell's absolute contribution
    drops below ``tol`` times the running sum.
    """
    if not spec.is_hartogs:
        raise ContractViolation(f"kernel_series needs a Hartogs kind, not {spec}")
    if tol <= 0:
        raise ContractViolation(f"tol must be positive, got {tol}")
    P, Q = as_points(spec, p), as_points(spec, q)
    if P.ndim != 1 or Q.ndim != 1:
        raise ContractViolation("kernel_series evaluates one pair at a time")
    eta = complex(P[0] * np.conj(Q[0]))
    if eta == 0:
        raise PoleError("eta = z conj(x) = 0: the series has negative powers of eta")
    _pair(spec, P, Q, True)
    etak = complex(_ipow(np.complex128(eta), spec.k))
    t = P[1:] * np.conj(Q[1:]) / etak
    total = 0j
    for degree in range(max_shells):
        shell = frontier_shell(spec, degree)
        part, size = _backend.shell_sum(eta, t, shell.s, shell.beta, shell.weights)
        total += part
        if degree + 1 >= min_shells and size <= tol * abs(total):
            return total / etak ** spec.n
    raise ConvergenceError(
        f"kernel series for {spec} did not settle within {max_shells} shells")


def _product_kernel(spec: DomainSpec, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    base = _elementary_kernel(DomainSpec(Kind.UNIT_DISC), U[:, :1], V[:, :1])
    fiber_kind = Kind.POLYDISC if spec.kind is Kind.HARTOGS_POLYDISC else Kind.BALL
    fiber = _elementary_kernel(DomainSpec(fiber_kind, spec.n), U[:, 1:], V[:, 1:])
    return base * fiber


def kernel_via_transform(spec: DomainSpec, p, q):
    """``det J phi(p) * K_prod(phi(p), phi(q)) * conj(det J phi(q))``.

    ``K_prod`` is the disc kernel in the base times the polydisc (Omega_k) or
    ball (H_k) kernel in the fiber.
    """
    if not spec.is_hartogs:
        raise ContractViolation(f"kernel_via_transform needs a Hartogs kind, not {spec}")
    P, Q = _pair(spec, p, q, False)
    scalar = P.ndim == 1 and Q.ndim == 1
    P2, Q2 = np.atleast_2d(P), np.atleast_2d(Q)
    P2, Q2 = np.broadcast_arrays(P2, Q2)
    U, V = phi(spec, P2), phi(spec, Q2)
    jp, jq = phi_jacobian_det(spec, P2), phi_jacobian_det(spec, Q2)
    values = jp * _product_kernel(spec, U, V) * np.conj(jq)
    return complex(values[0]) if scalar else values
