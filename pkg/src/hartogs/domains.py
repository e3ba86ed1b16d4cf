"""Domain descriptors, membership, volumes, sampling and the fibering map.

Six kinds are supported: the unit disc, the punctured disc, the polydisc,
the unit ball, and two generalized Hartogs triangles in C^{1+n}::

    HartogsPolydisc (Omega_k):  |w_j| < |z|^k < 1            for every j
    HartogsBall     (H_k):      |w_1|^2 + ... + |w_n|^2 < |z|^{2k},  |z| < 1

Points are complex numpy arrays. A single point has shape ``(dim,)``, a batch
has shape ``(m, dim)``. For the Hartogs kinds column 0 is the base coordinate
``z`` and columns ``1..n`` are the fiber coordinates ``w_1..w_n``.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, SingularPointError


class Kind(str, enum.Enum):
    UNIT_DISC = "UnitDisc"
    PUNCTURED_DISC = "PuncturedDisc"
    POLYDISC = "Polydisc"
    BALL = "Ball"
    HARTOGS_POLYDISC = "HartogsPolydisc"
    HARTOGS_BALL = "HartogsBall"


_DISC_KINDS = (Kind.UNIT_DISC, Kind.PUNCTURED_DISC)
HARTOGS_KINDS = (Kind.HARTOGS_POLYDISC, Kind.HARTOGS_BALL)


@dataclass(frozen=True)
class DomainSpec:
    """One supported domain together with its parameters ``(n, k)``.

    ``n`` is the fiber dimension (forced to 1 for the disc kinds) and ``k``
    the power in the defining inequality; ``k`` only matters for the Hartogs
    kinds and is normalised to 1 elsewhere so that equal domains compare equal.
    """

    kind: Kind
    n: int = 1
    k: int = 1
    _dim: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        try:
            kind = Kind(self.kind)
        except ValueError:
            raise ContractViolation(f"unknown domain kind {self.kind!r}") from None
        for name in ("n", "k"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ContractViolation(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ContractViolation(f"{name} must be >= 1, got {value}")
        n, k = int(self.n), int(self.k)
        if kind in _DISC_KINDS:
            n = 1
        if kind not in HARTOGS_KINDS:
            k = 1
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        if kind in _DISC_KINDS:
            dim = 1
        elif kind in HARTOGS_KINDS:
            dim = 1 + n
        else:
            dim = n
        object.__setattr__(self, "_dim", dim)

    @property
    def dim(self) -> int:
        """Ambient complex dimension."""
        return self._dim

    @property
    def is_hartogs(self) -> bool:
        return self.kind in HARTOGS_KINDS

    @property
    def kn(self) -> int:
        return self.k * self.n

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "k": self.k}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "DomainSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ContractViolation(f"domain spec needs a 'kind' field: {obj!r}")
        return cls(obj["kind"], obj.get("n", 1), obj.get("k", 1))

    @classmethod
    def from_json(cls, text: str) -> "DomainSpec":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ContractViolation(f"domain spec is not valid JSON: {exc}") from None
        return cls.from_dict(obj)

    def __str__(self) -> str:
        if self.is_hartogs:
            return f"{self.kind.value}(n={self.n}, k={self.k})"
        if self.kind in _DISC_KINDS:
            return self.kind.value
        return f"{self.kind.value}(n={self.n})"


def hartogs_polydisc(n: int = 1, k: int = 1) -> DomainSpec:
    return DomainSpec(Kind.HARTOGS_POLYDISC, n, k)


def hartogs_ball(n: int = 1, k: int = 1) -> DomainSpec:
    return DomainSpec(Kind.HARTOGS_BALL, n, k)


# -- points -----------------------------------------------------------------

def as_points(spec: DomainSpec, p) -> np.ndarray:
    """Return ``p`` as a complex array with the domain's trailing dimension."""
    arr = np.asarray(p, dtype=complex)
    if arr.ndim == 0 and spec.dim == 1:
        arr = arr.reshape(1)
    if arr.ndim == 0 or arr.ndim > 2 or arr.shape[-1] != spec.dim:
        raise ContractViolation(
            f"{spec} expects points of dimension {spec.dim}, got shape {arr.shape}")
    return arr


def point_to_json(p) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(p, dtype=complex).ravel()]


def point_from_json(obj) -> np.ndarray:
    try:
        return np.array([complex(re, im) for re, im in obj], dtype=complex)
    except (TypeError, ValueError):
        raise ContractViolation(f"points serialize as [[re, im], ...], got {obj!r}") from None


def contains(spec: DomainSpec, p):
    """Strict membership test; vectorised over a leading batch axis."""
    pts = as_points(spec, p)
    a = np.abs(pts)
    kind = spec.kind
    if kind is Kind.UNIT_DISC:
        out = a[..., 0] < 1.0
    elif kind is Kind.PUNCTURED_DISC:
        out = (a[..., 0] > 0.0) & (a[..., 0] < 1.0)
    elif kind is Kind.POLYDISC:
        out = np.all(a < 1.0, axis=-1)
    elif kind is Kind.BALL:
        out = np.sum(a * a, axis=-1) < 1.0
    else:
        base = a[..., 0]
        bound = base ** spec.k
        fiber = a[..., 1:]
        if kind is Kind.HARTOGS_POLYDISC:
            out = np.all(fiber < bound[..., None], axis=-1) & (bound < 1.0)
        else:
            out = (np.sum(fiber * fiber, axis=-1) < bound * bound) & (base < 1.0)
        # the fiber inequality already forces z != 0
    return bool(out) if pts.ndim == 1 else out


def volume(spec: DomainSpec) -> float:
    """Exact Lebesgue volume (closed forms, see ``docs/derivations.md``)."""
    n, kind = spec.n, spec.kind
    if kind in _DISC_KINDS:
        return math.pi
    if kind is Kind.POLYDISC:
        return math.pi ** n
    if kind is Kind.BALL:
        return math.pi ** n / math.factorial(n)
    vol = math.pi ** (n + 1) / (spec.kn + 1)
    if kind is Kind.HARTOGS_BALL:
        vol /= math.factorial(n)
    return vol


# -- the fibering map -------------------------------------------------------

def _require_hartogs(spec: DomainSpec, what: str) -> None:
    if not spec.is_hartogs:
        raise ContractViolation(f"{what} is only defined for the Hartogs kinds, not {spec}")


def _base_power(spec: DomainSpec, pts: np.ndarray) -> np.ndarray:
    z = pts[..., 0]
    if np.any(z == 0):
        raise SingularPointError("base coordinate z = 0 is a singular point of the fibering map")
    zk = np.ones_like(z)
    for _ in range(spec.k):
        zk = zk * z
    return zk


def phi(spec: DomainSpec, p, check: bool = True) -> np.ndarray:
    """``(z, w) -> (z, w / z^k)``, mapping the domain onto D* x (polydisc or ball)."""
    _require_hartogs(spec, "phi")
    pts = as_points(spec, p)
    zk = _base_power(spec, pts)
    if check and not np.all(contains(spec, pts)):
        raise ContractViolation(f"point(s) outside {spec}")
    out = pts.copy()
    out[..., 1:] = pts[..., 1:] / zk[..., None]
    return out


def phi_inv(spec: DomainSpec, p) -> np.ndarray:
    """``(z, u) -> (z, z^k u)``."""
    _require_hartogs(spec, "phi_inv")
    pts = as_points(spec, p)
    zk = _base_power(spec, pts)
    out = pts.copy()
    out[..., 1:] = pts[..., 1:] * zk[..., None]
    return out


def phi_jacobian_det(spec: DomainSpec, p, check: bool = True):
    """Complex Jacobian determinant of ``phi``, equal to ``z^{-kn}``."""
    _require_hartogs(spec, "phi_jacobian_det")
    pts = as_points(spec, p)
    zk = _base_power(spec, pts)
    if check and not np.all(contains(spec, pts)):
        raise ContractViolation(f"point(s) outside {spec}")
    det = 1.0 / zk ** spec.n
    return complex(det) if pts.ndim == 1 else det


# -- sampling ---------------------------------------------------------------

def _open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    u = rng.random(size)
    # keep draws in the open interval so radii never hit 0
    return np.where(u == 0.0, 2.0 ** -54, u)


def _unit_phases(rng, size) -> np.ndarray:
    return np.exp(2j * np.pi * rng.random(size))


def _disc_points(rng, count: int, dims: int) -> np.ndarray:
    return np.sqrt(_open_uniform(rng, (count, dims))) * _unit_phases(rng, (count, dims))


def _ball_points(rng, count: int, dims: int) -> np.ndarray:
    g = rng.standard_normal((count, 2 * dims))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radius = _open_uniform(rng, count) ** (1.0 / (2 * dims))
    return (g[:, :dims] + 1j * g[:, dims:]) * radius[:, None]


@dataclass(frozen=True)
class SampleStream:
    """A reproducible batch of uniform points drawn from ``(seed, stream)``."""

    spec: DomainSpec
    seed: int
    stream: int
    points: np.ndarray

    def __len__(self) -> int:
        return self.points.shape[0]

    def substream(self, index: int, count: int) -> "SampleStream":
        """An independent stream for parallel consumer ``index``."""
        return sample(self.spec, self.seed, count, stream=(self.stream, index))


def _flatten_key(stream):
    if isinstance(stream, (tuple, list)):
        for part in stream:
            yield from _flatten_key(part)
    else:
        yield int(stream)


def _generator(seed: int, stream) -> np.random.Generator:
    key = tuple(_flatten_key(stream))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=key)))


def sample(spec: DomainSpec, seed: int, count: int, stream=0) -> SampleStream:
    """Draw ``count`` i.i.d. uniform points from the domain.

    Hartogs kinds use the base radius ``U**(1/(2kn+2))`` (the inverse CDF of
    the radial pushforward density, proportional to ``r^(2kn+1)``), a uniform
    angle, then a uniform fiber point in the polydisc or ball of radius
    ``|z|^k``. The same ``(seed, stream)`` always yields the same points.
    """
    if count < 1:
        raise ContractViolation(f"count must be >= 1, got {count}")
    rng = _generator(seed, stream)
    kind, n = spec.kind, spec.n
    if kind in _DISC_KINDS:
        pts = _disc_points(rng, count, 1)
    elif kind is Kind.POLYDISC:
        pts = _disc_points(rng, count, n)
    elif kind is Kind.BALL:
        pts = _ball_points(rng, count, n)
    else:
        r = _open_uniform(rng, count) ** (1.0 / (2 * spec.kn + 2))
        z = r * _unit_phases(rng, count)
        if kind is Kind.HARTOGS_POLYDISC:
            u = _disc_points(rng, count, n)
        else:
            u = _ball_points(rng, count, n)
        pts = np.empty((count, 1 + n), dtype=complex)
        pts[:, 0] = z
        pts[:, 1:] = u * (r ** spec.k)[:, None]
    return SampleStream(spec, int(seed), stream, pts)


def interior_points(spec: DomainSpec, seed: int, count: int, base_max: float = 0.8,
                    fiber_max: float = 0.8, stream=0) -> np.ndarray:
    """Random points kept away from the boundary, for kernel comparisons.

    Hartogs kinds: base uniform in the disc of radius ``base_max``, fiber
    uniform in ``fiber_max`` times the fiber polydisc/ball over that base point.
    Other kinds: uniform in the domain scaled by ``base_max``.
    """
    rng = _generator(seed, (7919, stream))
    if not spec.is_hartogs:
        return sample(spec, seed, count, (7919, stream)).points * base_max
    n = spec.n
    z = base_max * _disc_points(rng, count, 1)[:, 0]
    if spec.kind is Kind.HARTOGS_POLYDISC:
        u = _disc_points(rng, count, n)
    else:
        u = _ball_points(rng, count, n)
    pts = np.empty((count, 1 + n), dtype=complex)
    pts[:, 0] = z
    pts[:, 1:] = fiber_max * u * (np.abs(z) ** spec.k)[:, None]
    return pts
