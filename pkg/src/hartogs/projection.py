"""The Bergman projection on Omega_k and H_k.

Two independent evaluations are provided: expansion in the orthogonal
monomial basis with quadrature coefficients (:func:`project_series`) and
Monte Carlo integration against the closed-form kernel
(:func:`project_kernel`). :func:`project_conj_monomial` gives the exact
projection of ``conj(z)^{kn}``, the function whose image is used to show the
projection fails to be bounded on L^p for large p.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .basis import MultiIndex, enumerate_indices, is_admissible, monomial, norm_sq
from .domains import DomainSpec, as_points, contains, sample, volume
from .errors import ContractViolation, IntegrationError
from .integrate import (
    IntegralEstimate, QuadratureRule, _node_chunks, fibered_nodes, mc_estimate,
)
from .kernels import kernel_closed


@dataclass(frozen=True)
class SeriesFunction:
    """A finite Laurent series ``sum c_m z^alpha w^beta`` on a Hartogs domain."""

    spec: DomainSpec
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.spec.is_hartogs:
            raise ContractViolation(f"series functions live on Hartogs kinds, not {self.spec}")
        clean = {}
        for m, c in self.coeffs.items():
            if not isinstance(m, MultiIndex):
                m = MultiIndex(*m)
            if not is_admissible(self.spec, m):
                raise ContractViolation(f"{m} is not admissible for {self.spec}")
            clean[m] = complex(c)
        object.__setattr__(self, "coeffs", clean)

    def __call__(self, points) -> np.ndarray:
        pts = as_points(self.spec, points)
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for m, c in self.coeffs.items():
            out = out + c * monomial(self.spec, m, pts)
        return out

    def significant(self, threshold: float = 1e-8) -> dict:
        return {m: c for m, c in self.coeffs.items() if abs(c) > threshold}

    def to_records(self) -> list:
        return [{"alpha": m.alpha, "beta": list(m.beta), "coeff": [c.real, c.imag]}
                for m, c in self.coeffs.items()]

    def to_json(self) -> str:
        return json.dumps(self.to_records())

    @classmethod
    def from_json(cls, spec: DomainSpec, text: str) -> "SeriesFunction":
        try:
            records = json.loads(text)
            coeffs = {MultiIndex(r["alpha"], tuple(r["beta"])): complex(*r["coeff"])
                      for r in records}
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ContractViolation(f"bad series JSON: {exc}") from None
        return cls(spec, coeffs)


def project_series(spec: DomainSpec, f, degree_cap: int,
                   rule: QuadratureRule | None = None) -> SeriesFunction:
    """Project ``f`` onto the span of ``enumerate_indices(spec, degree_cap)``.

    Each coefficient is ``<f, e_m> / ||e_m||^2`` with the inner product taken
    by the fibered tensor rule; the basis is orthogonal, so no Gram solve is
    needed. The rule must resolve the angular frequencies involved, i.e.
    ``angular_order`` should exceed the largest exponent difference.
    """
    indices = enumerate_indices(spec, degree_cap)
    rule = rule or QuadratureRule()
    fn = fibered_nodes(spec, rule)
    betas = sorted({m.beta for m in indices})
    alphas = sorted({m.alpha for m in indices})
    b_pos = {b: i for i, b in enumerate(betas)}
    a_pos = {a: i for i, a in enumerate(alphas)}
    fiber_conj = np.conj(np.stack(
        [np.prod(fn.fiber ** np.array(b), axis=1) for b in betas], axis=1))
    sizes = np.array([sum(b) for b in betas])
    table = np.zeros((len(alphas), len(betas)), dtype=complex)
    for pts, _, sl in _node_chunks(spec, rule):
        fv = np.asarray(f(pts), dtype=complex)
        if not np.all(np.isfinite(fv)):
            raise IntegrationError("f is not finite at every quadrature node")
        # node (i, j) has w = scale_i u_j, so conj(e_m) splits into base and fiber parts
        fiber_part = (fv.reshape(-1, fn.fiber.shape[0]) * fn.fiber_weights) @ fiber_conj
        base_part = fiber_part * fn.base_weights[sl, None] * fn.scale[sl, None] ** sizes
        zc = np.conj(fn.base[sl])
        zpow = np.stack([zc ** a if a >= 0 else (1.0 / zc) ** (-a) for a in alphas], axis=1)
        table += zpow.T @ base_part
    return SeriesFunction(spec, {
        m: table[a_pos[m.alpha], b_pos[m.beta]] / norm_sq(spec, m) for m in indices})


def project_kernel(spec: DomainSpec, f, eval_at, seed: int = 0, count: int = 1_000_000,
                   stream=0):
    """Monte Carlo value of ``int K(p, q) f(q) dV(q)`` at ``eval_at``.

    One sample stream is shared by all evaluation points; ``f`` is evaluated
    once. Returns an :class:`IntegralEstimate` for a single point, or a list
    for a batch.
    """
    P = as_points(spec, eval_at)
    if not np.all(contains(spec, P)):
        raise ContractViolation(f"evaluation point(s) not interior to {spec}")
    pts = sample(spec, seed, count, stream).points
    fq = np.asarray(f(pts), dtype=complex)
    out = []
    for p in np.atleast_2d(P):
        kern = kernel_closed(spec, p, pts, check=False)
        out.append(mc_estimate(spec, kern * fq))
    return out[0] if P.ndim == 1 else out


def conj_monomial_constant(spec: DomainSpec) -> Fraction:
    """The constant ``C`` with ``P(conj(z)^{kn}) = C z^{-kn}``, exactly ``1/(kn+1)``."""
    if not spec.is_hartogs:
        raise ContractViolation(f"needs a Hartogs kind, not {spec}")
    return Fraction(1, spec.kn + 1)


def project_conj_monomial(spec: DomainSpec) -> SeriesFunction:
    """Exact projection of ``f = conj(z)^{kn}``.

    Rotation in the base angle kills every pairing except the one with
    ``z^{-kn}``, and there ``conj(z)^{kn} conj(z^{-kn}) = 1``, so the single
    coefficient is ``volume / ||z^{-kn}||^2``.
    """
    if not spec.is_hartogs:
        raise ContractViolation(f"needs a Hartogs kind, not {spec}")
    m = MultiIndex(-spec.kn, (0,) * spec.n)
    return SeriesFunction(spec, {m: volume(spec) / norm_sq(spec, m)})


def conj_base_power(spec: DomainSpec, power: int | None = None):
    """The test function ``conj(z)^power`` (default ``power = kn``)."""
    power = spec.kn if power is None else power

    def f(points):
        return np.conj(np.asarray(points)[..., 0]) ** power

    return f


def mc_inner(spec: DomainSpec, f, g, seed: int = 0, count: int = 1_000_000,
             stream=0) -> IntegralEstimate:
    """Monte Carlo ``<f, g> = int f conj(g) dV``."""
    pts = sample(spec, seed, count, stream).points
    return mc_estimate(spec, np.asarray(f(pts)) * np.conj(np.asarray(g(pts))))
