"""L^p boundedness of the Bergman projection on Omega_k and H_k.

The projection is bounded on L^p exactly for ``p`` strictly between
``(2nk+2)/(nk+2)`` and ``(2nk+2)/(nk)``; the endpoints are Hölder conjugate.
All endpoint arithmetic is done in exact rationals. The numerical side
consists of two Monte Carlo experiments: the L^p norm of
``P(conj(z)^{kn}) ~ z^{-kn}``, which blows up from the upper endpoint on, and
the Schur-test ratio for the weights

    h(x, y) = (1 - |x|^2) |x|^{2k(n-1)} (|x|^{2k} - |y_1|^2 - ... - |y_n|^2)
    g(x, y) = (1 - |x|^2) (|x|^{2k} - |y_1|^2) ... (|x|^{2k} - |y_n|^2)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

import numpy as np

from .domains import DomainSpec, Kind, as_points, contains, sample
from .errors import ContractViolation
from .integrate import IntegralEstimate, mc_estimate
from .kernels import kernel_closed

DIVERGENT = math.inf


def to_rational(p) -> Fraction:
    """Parse an exponent given as a Fraction, int, decimal string, ``"a/b"`` or float.

    Floats go through their shortest decimal representation, so ``4/3`` typed
    as ``1.3333333333333333`` is a rational just below 4/3.
    """
    if isinstance(p, Fraction):
        return p
    if isinstance(p, (int, np.integer)):
        return Fraction(int(p))
    text = repr(float(p)) if isinstance(p, (float, np.floating)) else str(p).strip()
    try:
        if "/" in text:
            return Fraction(text)
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation):
        raise ContractViolation(f"cannot read exponent {p!r} as a rational") from None


@dataclass(frozen=True)
class ExponentInterval:
    p_low: Fraction
    p_high: Fraction

    def __contains__(self, p) -> bool:
        q = to_rational(p)
        return self.p_low < q < self.p_high

    def as_dict(self) -> dict:
        return {"p_low": str(self.p_low), "p_high": str(self.p_high),
                "p_low_decimal": float(self.p_low), "p_high_decimal": float(self.p_high)}


def _check_nk(n: int, k: int) -> None:
    if n < 1 or k < 1:
        raise ContractViolation(f"n and k must be >= 1, got n={n}, k={k}")


def critical_interval(n: int, k: int) -> ExponentInterval:
    _check_nk(n, k)
    nk = n * k
    return ExponentInterval(Fraction(2 * nk + 2, nk + 2), Fraction(2 * nk + 2, nk))


def is_bounded(p, n: int, k: int) -> bool:
    q = to_rational(p)
    if q <= 1:
        raise ContractViolation(f"p must exceed 1, got {p}")
    return q in critical_interval(n, k)


def radial_lp_integral(p, n: int, k: int) -> float:
    """``2 pi^{n+1} int_0^1 r^{1 - pnk + 2nk} dr``, or :data:`DIVERGENT`.

    Finiteness is decided in exact arithmetic: the integral converges iff
    ``2 - pnk + 2nk > 0``, i.e. ``p < (2 + 2nk)/(nk)``.
    """
    _check_nk(n, k)
    q = to_rational(p)
    if q <= 0:
        raise ContractViolation(f"p must be positive, got {p}")
    nk = n * k
    denom = 2 - q * nk + 2 * nk
    if denom <= 0:
        return DIVERGENT
    return 2 * math.pi ** (n + 1) / float(denom)


def lp_norm_closed(spec: DomainSpec, p) -> float:
    """Exact ``int_D |x|^{-pnk} dV``; the H_k value carries an extra ``1/n!``."""
    if not spec.is_hartogs:
        raise ContractViolation(f"needs a Hartogs kind, not {spec}")
    value = radial_lp_integral(p, spec.n, spec.k)
    if spec.kind is Kind.HARTOGS_BALL and value != DIVERGENT:
        value /= math.factorial(spec.n)
    return value


def mc_lp_norm(spec: DomainSpec, p, seed: int = 0, count: int = 100_000,
               stream=0) -> IntegralEstimate:
    """Monte Carlo ``int |x|^{-p nk} dV``, the p-th power norm of ``z^{-kn}``."""
    if not spec.is_hartogs:
        raise ContractViolation(f"needs a Hartogs kind, not {spec}")
    pf = float(to_rational(p))
    if pf <= 0:
        raise ContractViolation(f"p must be positive, got {p}")
    pts = sample(spec, seed, count, stream).points
    return mc_estimate(spec, np.abs(pts[:, 0]) ** (-pf * spec.kn))


@dataclass(frozen=True)
class DivergenceCheck:
    small: IntegralEstimate
    large: IntegralEstimate
    sigmas: float

    @property
    def gap(self) -> float:
        return self.large.value.real - self.small.value.real

    @property
    def combined_sigma(self) -> float:
        return math.hypot(self.small.std_error, self.large.std_error)

    @property
    def triggered(self) -> bool:
        """The larger run exceeds the smaller by more than ``sigmas`` combined errors."""
        return self.gap > self.sigmas * self.combined_sigma


def divergence_check(spec: DomainSpec, p, seed: int = 0, count: int = 100_000,
                     factor: int = 4, sigmas: float = 3.0) -> DivergenceCheck:
    """Compare estimates at ``count`` and ``factor * count`` independent samples."""
    small = mc_lp_norm(spec, p, seed, count, stream=(1, 0))
    large = mc_lp_norm(spec, p, seed, factor * count, stream=(1, 1))
    return DivergenceCheck(small, large, sigmas)


# -- Schur test -----------------------------------------------------------------

@dataclass(frozen=True)
class SchurWeightSpec:
    epsilon: float
    domain: DomainSpec

    def __post_init__(self):
        if not self.domain.is_hartogs:
            raise ContractViolation(f"Schur weights need a Hartogs kind, not {self.domain}")
        lo, hi = epsilon_range(self.domain)
        if not lo <= to_rational(self.epsilon) < hi:
            raise ContractViolation(
                f"epsilon={self.epsilon} outside [{lo}, {hi}) for {self.domain}")


def epsilon_range(spec: DomainSpec) -> tuple[Fraction, Fraction]:
    """``[1/2, (kn+2)/(2kn))`` as exact rationals."""
    return Fraction(1, 2), Fraction(spec.kn + 2, 2 * spec.kn)


# "natural": h on H_k (one ball deficit), g on Omega_k (one deficit per fiber disc).
# "printed": the opposite assignment, h with the Omega_k estimate and g with H_k.
PAIRINGS = ("natural", "printed")


def _weight_h(spec, a):
    base2 = a[..., 0] ** 2
    bound = base2 ** spec.k
    return (1.0 - base2) * bound ** (spec.n - 1) * (bound - np.sum(a[..., 1:] ** 2, axis=-1))


def _weight_g(spec, a):
    base2 = a[..., 0] ** 2
    bound = base2 ** spec.k
    return (1.0 - base2) * np.prod(bound[..., None] - a[..., 1:] ** 2, axis=-1)


def schur_weight(spec: DomainSpec, q, pairing: str = "natural", check: bool = True):
    """Schur weight of the domain at ``q`` (``h`` for H_k, ``g`` for Omega_k)."""
    if not spec.is_hartogs:
        raise ContractViolation(f"Schur weights need a Hartogs kind, not {spec}")
    if pairing not in PAIRINGS:
        raise ContractViolation(f"pairing must be one of {PAIRINGS}, got {pairing!r}")
    pts = as_points(spec, q)
    if check and not np.all(contains(spec, pts)):
        raise ContractViolation(f"Schur weight needs interior points of {spec}")
    use_h = (spec.kind is Kind.HARTOGS_BALL) == (pairing == "natural")
    if use_h and spec.kind is Kind.HARTOGS_POLYDISC and spec.n > 1:
        # the polydisc fiber leaves the ball, where h changes sign
        raise ContractViolation(f"h is not positive on {spec}; use the natural pairing")
    a = np.abs(pts)
    out = _weight_h(spec, a) if use_h else _weight_g(spec, a)
    return float(out) if pts.ndim == 1 else out


def schur_ratio(spec: DomainSpec, eps: float, query, seed: int = 0, count: int = 200_000,
                pairing: str = "natural", strict: bool = True, stream=0):
    """``int |K(query, q)| W(q)^{-eps} dV(q) / W(query)^{-eps}`` by Monte Carlo.

    ``query`` may be a batch; all queries share one sample stream. Returns an
    :class:`IntegralEstimate` (or a list) whose value is the real ratio. With
    ``strict=False`` epsilons outside the admissible range are accepted for
    diagnostic sweeps.
    """
    if strict:
        SchurWeightSpec(eps, spec)
    elif eps <= 0:
        raise ContractViolation(f"eps must be positive, got {eps}")
    Q = as_points(spec, query)
    wq = np.atleast_1d(schur_weight(spec, Q, pairing))
    pts = sample(spec, seed, count, stream).points
    weight_term = schur_weight(spec, pts, pairing, check=False) ** (-eps)
    out = []
    for qi, w in zip(np.atleast_2d(Q), wq):
        kern = np.abs(kernel_closed(spec, qi, pts, check=False))
        est = mc_estimate(spec, kern * weight_term)
        scale = w ** eps
        out.append(IntegralEstimate(complex(est.value.real * scale), est.std_error * scale,
                                    est.node_count))
    return out[0] if Q.ndim == 1 else out


def query_grid(spec: DomainSpec, radii, fractions) -> np.ndarray:
    """Queries ``(r, f r^k, ..., f r^k)`` (polydisc) or with ``|w| = f r^k`` (ball)."""
    rows = []
    n, k = spec.n, spec.k
    for r in radii:
        for frac in fractions:
            bound = r ** k
            if spec.kind is Kind.HARTOGS_BALL:
                fiber = np.full(n, frac * bound / math.sqrt(n))
            else:
                fiber = np.full(n, frac * bound)
            rows.append(np.concatenate([[r], fiber]))
    return np.array(rows, dtype=complex)


@dataclass(frozen=True)
class SchurMax:
    value: float
    std_error: float
    query: np.ndarray


def schur_max(spec: DomainSpec, eps: float, queries, seed: int = 0, count: int = 200_000,
              pairing: str = "natural", strict: bool = True, stream=0) -> SchurMax:
    """Largest empirical Schur ratio over ``queries`` and where it occurs."""
    ests = schur_ratio(spec, eps, queries, seed, count, pairing, strict, stream)
    if isinstance(ests, IntegralEstimate):
        ests = [ests]
    i = int(np.argmax([e.value.real for e in ests]))
    return SchurMax(ests[i].value.real, ests[i].std_error, np.atleast_2d(queries)[i])
