"""Laurent-monomial orthogonal basis of the Bergman space on Omega_k and H_k.

The monomials ``z^alpha w^beta`` with ``beta_j >= 0`` and
``alpha >= -k(|beta| + n)`` are mutually orthogonal and span the Bergman
space. It is convenient to work with the *shifted degree*
``s = alpha + k(|beta| + n) >= 0``; in terms of ``s`` the squared norms are

    Omega_k:  (2 pi)^{n+1} / ( prod_j (2 beta_j + 2) * (2 s + 2) )
    H_k:      pi^{n+1} * beta! / (n + |beta|)! / (s + 1)

(derivation in ``docs/derivations.md``).
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainSpec, Kind
from .errors import ContractViolation


@dataclass(frozen=True, order=True)
class MultiIndex:
    alpha: int
    beta: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", int(self.alpha))
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))

    @property
    def size(self) -> int:
        """``|beta|``."""
        return sum(self.beta)

    def shifted_degree(self, spec: DomainSpec) -> int:
        return self.alpha + spec.k * (self.size + spec.n)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": list(self.beta)}

    def __str__(self) -> str:
        return f"({self.alpha}, {self.beta})"


def _require_hartogs(spec: DomainSpec) -> None:
    if not spec.is_hartogs:
        raise ContractViolation(f"the monomial basis is defined for the Hartogs kinds, not {spec}")


def is_admissible(spec: DomainSpec, m: MultiIndex) -> bool:
    _require_hartogs(spec)
    if len(m.beta) != spec.n:
        return False
    return all(b >= 0 for b in m.beta) and m.shifted_degree(spec) >= 0


def _inverse_norm_exact(spec: DomainSpec, s: int, beta) -> int:
    """``pi^{n+1} / ||z^alpha w^beta||^2``, which is always an integer."""
    if spec.kind is Kind.HARTOGS_POLYDISC:
        return (s + 1) * math.prod(b + 1 for b in beta)
    multinomial = math.factorial(spec.n + sum(beta))
    for b in beta:
        multinomial //= math.factorial(b)
    # (n+|beta|)!/beta! is n! times a multinomial coefficient, hence exact
    return (s + 1) * multinomial


def norm_sq(spec: DomainSpec, m: MultiIndex) -> float:
    """Exact squared L^2 norm of the monomial ``z^alpha w^beta``."""
    if not is_admissible(spec, m):
        raise ContractViolation(f"multi-index {m} is not admissible for {spec}")
    inv = _inverse_norm_exact(spec, m.shifted_degree(spec), m.beta)
    return math.pi ** (spec.n + 1) / float(inv)


def enumerate_indices(spec: DomainSpec, degree_cap: int) -> list[MultiIndex]:
    """Admissible indices with ``|beta| <= cap`` and ``alpha + kn <= cap``.

    The cap bounds the fiber degree and the base exponent measured from the
    most negative exponent allowed at ``beta = 0``; larger ``|beta|`` unlock
    more negative ``alpha``. Sorted by ``(s, |beta|, beta, alpha)`` with ``s``
    the shifted degree, so truncated sums are reproducible.
    """
    _require_hartogs(spec)
    if degree_cap < 0:
        raise ContractViolation(f"degree_cap must be >= 0, got {degree_cap}")
    return list(_enumerate_cached(spec, int(degree_cap)))


@functools.lru_cache(maxsize=64)
def _enumerate_cached(spec: DomainSpec, cap: int) -> tuple:
    n, k = spec.n, spec.k
    keys = []
    for beta in itertools.product(range(cap + 1), repeat=n):
        size = sum(beta)
        if size > cap:
            continue
        for alpha in range(-k * (size + n), cap - k * n + 1):
            s = alpha + k * (size + n)
            keys.append(((s, size, beta, alpha), MultiIndex(alpha, beta)))
    keys.sort(key=lambda item: item[0])
    return tuple(m for _, m in keys)


@dataclass(frozen=True)
class Shell:
    """The indices with ``s + |beta| == N``, in array form.

    ``weights`` holds ``1 / norm_sq`` for each index.
    """

    degree: int
    s: np.ndarray
    beta: np.ndarray
    weights: np.ndarray


def frontier_shell(spec: DomainSpec, degree: int) -> Shell:
    """Indices on the truncation frontier ``s + |beta| == degree``."""
    _require_hartogs(spec)
    return _shell_cached(spec, int(degree))


@functools.lru_cache(maxsize=4096)
def _shell_cached(spec: DomainSpec, degree: int) -> Shell:
    n = spec.n
    rows = [b for b in itertools.product(range(degree + 1), repeat=n) if sum(b) <= degree]
    beta = np.array(rows, dtype=np.int64).reshape(-1, n)
    s = degree - beta.sum(axis=1)
    scale = math.pi ** (n + 1)
    weights = np.array(
        [float(_inverse_norm_exact(spec, int(si), b)) / scale for si, b in zip(s, rows)])
    for arr in (s, beta, weights):
        arr.setflags(write=False)
    return Shell(degree, s, beta, weights)


def monomial(spec: DomainSpec, m: MultiIndex, points) -> np.ndarray:
    """Evaluate ``z^alpha w^beta`` on a batch of points."""
    pts = np.asarray(points, dtype=complex)
    z = pts[..., 0]
    out = z ** m.alpha if m.alpha >= 0 else (1.0 / z) ** (-m.alpha)
    for j, b in enumerate(m.beta):
        if b:
            out = out * pts[..., 1 + j] ** b
    return out
