"""Integration over the supported domains.

Deterministic rules are tensor products built in fibered coordinates. The
base point is ``z = sqrt(t) e^{i theta}`` and the fiber is ``w = |z|^k u``
(the substitution ``y_j = x^k u_j``), which turns the cusp at ``z = 0`` into a
plain product of the disc with a fixed polydisc or ball. Every squared
modulus becomes a Gauss-Legendre variable on (0, 1), every angle a
trapezoid variable, and the ball's squared moduli live on a simplex handled
by the collapsed (Duffy) map. The resulting weights absorb
``dV = (1/2) dt dtheta * t^{kn} * prod_j (1/2) dsigma_j dpsi_j``.

Monte Carlo estimates use :func:`hartogs.domains.sample` and report the
standard error of the complex mean, ``sqrt(E|f - mean|^2 / N)``.

Integrands are vectorised callables taking an ``(m, dim)`` complex array and
returning ``m`` values.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainSpec, Kind, SampleStream, sample, volume
from .errors import ContractViolation, IntegrationError

# base nodes per evaluation chunk are chosen so chunks hold about this many points
_CHUNK_POINTS = 1 << 17


@dataclass(frozen=True)
class QuadratureRule:
    radial_order: int = 16
    angular_order: int = 32

    def __post_init__(self):
        if self.radial_order < 2:
            raise ContractViolation(f"radial_order must be >= 2, got {self.radial_order}")
        if self.angular_order < 4:
            raise ContractViolation(f"angular_order must be >= 4, got {self.angular_order}")

    def doubled(self) -> "QuadratureRule":
        return QuadratureRule(2 * self.radial_order, 2 * self.angular_order)


@dataclass(frozen=True)
class IntegralEstimate:
    value: complex
    std_error: float
    node_count: int

    def __post_init__(self):
        if not self.std_error >= 0:
            raise ContractViolation(f"std_error must be non-negative, got {self.std_error}")

    def within(self, expected, sigmas: float = 3.0) -> bool:
        return abs(self.value - expected) <= sigmas * self.std_error


def _gauss_unit(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _angles(order: int):
    return 2 * np.pi * np.arange(order) / order, np.full(order, 2 * np.pi / order)


def _disc_factor(rule: QuadratureRule):
    """Nodes/weights of the unit disc in ``(sigma = rho^2, psi)`` form."""
    sig, ws = _gauss_unit(rule.radial_order)
    psi, wp = _angles(rule.angular_order)
    u = (np.sqrt(sig)[:, None] * np.exp(1j * psi)[None, :]).ravel()
    w = (0.5 * ws[:, None] * wp[None, :]).ravel()
    return u, w


def _polydisc_nodes(rule: QuadratureRule, n: int):
    u, w = _disc_factor(rule)
    pts = np.array(list(itertools.product(u, repeat=n)), dtype=complex).reshape(-1, n)
    wts = np.prod(np.array(list(itertools.product(w, repeat=n))).reshape(-1, n), axis=1)
    return pts, wts


def _ball_nodes(rule: QuadratureRule, n: int):
    """Unit ball of C^n: squared moduli on the simplex via the collapsed map."""
    v, wv = _gauss_unit(rule.radial_order)
    psi, wp = _angles(rule.angular_order)
    vs = np.array(list(itertools.product(v, repeat=n))).reshape(-1, n)
    wvs = np.prod(np.array(list(itertools.product(wv, repeat=n))).reshape(-1, n), axis=1)
    sigma = np.empty_like(vs)
    remaining = np.ones(vs.shape[0])
    jac = np.ones(vs.shape[0])
    for j in range(n):
        sigma[:, j] = vs[:, j] * remaining
        jac *= remaining
        remaining = remaining * (1.0 - vs[:, j])
    # remaining now equals 1 - sum(sigma) > 0: nodes stay strictly inside
    phases = np.exp(1j * np.array(list(itertools.product(psi, repeat=n)))).reshape(-1, n)
    wph = np.prod(np.array(list(itertools.product(wp, repeat=n))).reshape(-1, n), axis=1)
    radial = np.sqrt(sigma)
    pts = (radial[:, None, :] * phases[None, :, :]).reshape(-1, n)
    wts = ((0.5 ** n) * (wvs * jac)[:, None] * wph[None, :]).ravel()
    return pts, wts


def _fiber_nodes(spec: DomainSpec, rule: QuadratureRule):
    if spec.kind in (Kind.POLYDISC, Kind.HARTOGS_POLYDISC):
        return _polydisc_nodes(rule, spec.n)
    return _ball_nodes(rule, spec.n)


@dataclass(frozen=True)
class FiberedNodes:
    """Tensor rule factored as base nodes times fiber nodes.

    The node ``(i, j)`` is ``(base[i], scale[i] * fiber[j])`` with weight
    ``base_weights[i] * fiber_weights[j]``. Kinds without a base factor have a
    single dummy base node of weight 1 and no base column.
    """

    base: np.ndarray
    base_weights: np.ndarray
    scale: np.ndarray
    fiber: np.ndarray
    fiber_weights: np.ndarray
    has_base: bool

    @property
    def size(self) -> int:
        return self.base.shape[0] * self.fiber.shape[0]

    def assemble(self, sl=slice(None)) -> np.ndarray:
        bu, bs = self.base[sl], self.scale[sl]
        nf, d = self.fiber.shape
        if not self.has_base:
            return self.fiber.copy()
        pts = np.empty((bu.shape[0], nf, 1 + d), dtype=complex)
        pts[:, :, 0] = bu[:, None]
        if d:
            pts[:, :, 1:] = bs[:, None, None] * self.fiber[None, :, :]
        return pts.reshape(-1, 1 + d)


def fibered_nodes(spec: DomainSpec, rule: QuadratureRule) -> FiberedNodes:
    kind = spec.kind
    if kind in (Kind.POLYDISC, Kind.BALL):
        pts, wts = _fiber_nodes(spec, rule)
        one = np.ones(1)
        return FiberedNodes(np.zeros(1, complex), one, one, pts, wts, False)
    base_u, base_w = _disc_factor(rule)
    if kind in (Kind.UNIT_DISC, Kind.PUNCTURED_DISC):
        return FiberedNodes(base_u, base_w, np.ones_like(base_w),
                            np.zeros((1, 0), complex), np.ones(1), True)
    fiber_pts, fiber_wts = _fiber_nodes(spec, rule)
    t = np.abs(base_u) ** 2
    return FiberedNodes(base_u, base_w * t ** spec.kn, np.sqrt(t) ** spec.k,
                        fiber_pts, fiber_wts, True)


def _node_chunks(spec: DomainSpec, rule: QuadratureRule):
    """Yield ``(points, weights, base_slice)`` in a fixed order."""
    fn = fibered_nodes(spec, rule)
    nb, nf = fn.base.shape[0], fn.fiber.shape[0]
    per_chunk = max(1, _CHUNK_POINTS // nf)
    for start in range(0, nb, per_chunk):
        sl = slice(start, start + per_chunk)
        wts = (fn.base_weights[sl, None] * fn.fiber_weights[None, :]).ravel()
        yield fn.assemble(sl), wts, sl


def quadrature_nodes(spec: DomainSpec, rule: QuadratureRule):
    """Flattened ``(points, weights)`` of the tensor rule (for small rules)."""
    chunks = list(_node_chunks(spec, rule))
    return (np.concatenate([c[0] for c in chunks]), np.concatenate([c[1] for c in chunks]))


def integrate_quad(spec: DomainSpec, f, rule: QuadratureRule | None = None) -> IntegralEstimate:
    """Tensor-rule estimate of the integral of ``f`` over the domain.

    Exact to rounding for integrands polynomial in the squared moduli and
    trigonometric in the angles within the rule's orders. Raises
    :class:`IntegrationError` on the first non-finite node value.
    """
    rule = rule or QuadratureRule()
    partials = []
    count = 0
    for pts, wts, _ in _node_chunks(spec, rule):
        vals = np.asarray(f(pts), dtype=complex)
        bad = ~np.isfinite(vals)
        if np.any(bad):
            idx = int(np.flatnonzero(bad)[0])
            raise IntegrationError(
                f"integrand is not finite at quadrature node {count + idx}: {pts[idx]}")
        partials.append(np.sum(vals * wts))
        count += pts.shape[0]
    return IntegralEstimate(complex(np.sum(np.array(partials))), 0.0, count)


def integrate_samples(stream: SampleStream, f, max_nonfinite: float = 1e-3) -> IntegralEstimate:
    """Monte Carlo estimate from an existing sample stream."""
    vals = np.asarray(f(stream.points), dtype=complex)
    return mc_estimate(stream.spec, vals, max_nonfinite)


def mc_estimate(spec: DomainSpec, values, max_nonfinite: float = 1e-3) -> IntegralEstimate:
    """``volume * mean`` with its standard error, dropping rare non-finite draws."""
    vals = np.asarray(values, dtype=complex)
    total = vals.shape[0]
    finite = np.isfinite(vals)
    dropped = total - int(np.count_nonzero(finite))
    if dropped > max_nonfinite * total:
        raise IntegrationError(
            f"{dropped} of {total} Monte Carlo values are not finite "
            f"(budget {max_nonfinite:.1%})")
    if dropped:
        vals = vals[finite]
    m = vals.shape[0]
    if m < 2:
        raise IntegrationError("need at least two finite samples")
    vol = volume(spec)
    mean = np.mean(vals)
    spread = math.sqrt(float(np.mean(np.abs(vals - mean) ** 2)) * m / (m - 1))
    return IntegralEstimate(complex(vol * mean), vol * spread / math.sqrt(m), m)


def integrate_mc(spec: DomainSpec, f, seed: int = 0, count: int = 100_000,
                 stream=0, max_nonfinite: float = 1e-3) -> IntegralEstimate:
    if count < 2:
        raise ContractViolation(f"count must be >= 2, got {count}")
    return integrate_samples(sample(spec, seed, count, stream), f, max_nonfinite)
