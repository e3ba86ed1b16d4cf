"""Invariant suites behind ``hartogs verify``.

Each check is a quick, seeded version of a property the test-suite covers
in more depth. Monte Carlo checks use 3 standard errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .basis import MultiIndex, enumerate_indices, is_admissible, monomial, norm_sq
from .domains import (
    DomainSpec, Kind, contains, hartogs_ball, hartogs_polydisc, interior_points,
    phi, phi_inv, sample, volume,
)
from .integrate import QuadratureRule, integrate_mc, integrate_quad
from .kernels import kernel_closed, kernel_series, kernel_via_transform
from .lp_analysis import (
    critical_interval, divergence_check, is_bounded, lp_norm_closed, mc_lp_norm,
    query_grid, radial_lp_integral, schur_max,
)
from .projection import (
    conj_base_power, project_conj_monomial, project_kernel, project_series,
)

NK_GRID = [(1, 1), (1, 2), (2, 1), (2, 2)]


@dataclass(frozen=True)
class CheckResult:
    suite: str
    check: str
    passed: bool
    detail: str


def hartogs_specs():
    for n, k in NK_GRID:
        yield hartogs_polydisc(n, k)
        yield hartogs_ball(n, k)


def _rel(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)) / np.abs(np.asarray(b))))


def suite_domains(seed):
    for spec in hartogs_specs():
        pts = sample(spec, seed, 10_000).points
        err = float(np.max(np.abs(phi_inv(spec, phi(spec, pts)) - pts)))
        yield f"phi round trip {spec}", err <= 1e-12, f"max error {err:.2e}"
    for spec in hartogs_specs():
        rng = np.random.default_rng(seed)
        m = 400_000
        box = np.sqrt(rng.random((m, spec.dim))) * np.exp(2j * np.pi * rng.random((m, spec.dim)))
        hits = contains(spec, box).astype(float)
        est = math.pi ** spec.dim * hits.mean()
        se = math.pi ** spec.dim * hits.std(ddof=1) / math.sqrt(m)
        ok = abs(est - volume(spec)) <= 3 * se
        yield f"rejection volume {spec}", ok, f"{est:.5f} vs {volume(spec):.5f} (se {se:.1e})"
    spec = hartogs_polydisc(1, 1)
    yield "boundary is excluded", not contains(spec, (0.5, 0.5)), "|w| = |z|^k"
    same = np.array_equal(sample(spec, seed, 1000).points, sample(spec, seed, 1000).points)
    yield "sampling is deterministic", same, "two draws with the same seed"


def suite_kernels(seed):
    for spec in hartogs_specs():
        P = interior_points(spec, seed, 1000, 0.95, 0.95, stream=0)
        Q = interior_points(spec, seed, 1000, 0.95, 0.95, stream=1)
        kpq, kqp = kernel_closed(spec, P, Q), kernel_closed(spec, Q, P)
        yield f"hermitian {spec}", _rel(kpq, np.conj(kqp)) <= 1e-12, f"rel {_rel(kpq, np.conj(kqp)):.1e}"
        diag = kernel_closed(spec, P, P)
        ok = bool(np.all(diag.real > 0) and np.all(np.abs(diag.imag) <= 1e-14 * np.abs(diag)))
        yield f"diagonal positive {spec}", ok, f"min {diag.real.min():.3e}"
        err = _rel(kernel_via_transform(spec, P, Q), kpq)
        yield f"transformation law {spec}", err <= 1e-10, f"rel {err:.1e}"
        P = interior_points(spec, seed, 10, stream=2)
        Q = interior_points(spec, seed, 10, stream=3)
        err = max(abs(kernel_series(spec, p, q) - kernel_closed(spec, p, q))
                  / abs(kernel_closed(spec, p, q)) for p, q in zip(P, Q))
        yield f"series agreement {spec}", err <= 1e-6, f"rel {err:.1e}"


def suite_basis(seed):
    for spec in (hartogs_polydisc(1, 1), hartogs_ball(2, 1)):
        low = MultiIndex(-spec.k * spec.n, (0,) * spec.n)
        below = MultiIndex(-spec.k * spec.n - 1, (0,) * spec.n)
        ok = is_admissible(spec, low) and not is_admissible(spec, below)
        yield f"admissibility edge {spec}", ok, f"{low} in, {below} out"
        stream = sample(spec, seed, 400_000)
        pts, vol = stream.points, volume(spec)
        for m, m2 in [(low, MultiIndex(0, (1,) + (0,) * (spec.n - 1))),
                      (MultiIndex(1, (0,) * spec.n), MultiIndex(1, (0,) * spec.n))]:
            vals = monomial(spec, m, pts) * np.conj(monomial(spec, m2, pts))
            est = vol * vals.mean()
            se = vol * vals.std(ddof=1) / math.sqrt(len(vals))
            target = norm_sq(spec, m) if m == m2 else 0.0
            yield (f"inner product {m},{m2} {spec}", abs(est - target) <= 3 * se,
                   f"{est.real:.4f} vs {target:.4f}")
        p = np.array([0.5, 0.2] + [0.0] * (spec.n - 1), dtype=complex)
        target = kernel_closed(spec, p, p).real
        partial = [sum(abs(monomial(spec, m, p)) ** 2 / norm_sq(spec, m)
                       for m in enumerate_indices(spec, cap)) for cap in (5, 20, 40)]
        ok = partial[0] < partial[1] < partial[2] and abs(partial[2] - target) <= 1e-4 * target
        yield f"parseval {spec}", ok, f"cap 40 rel gap {abs(partial[2] - target) / target:.1e}"


def suite_integrate(seed):
    spec = hartogs_polydisc(1, 1)
    est = integrate_quad(spec, lambda P: np.ones(len(P)), QuadratureRule(16, 32))
    yield "quadrature volume", abs(est.value - volume(spec)) <= 1e-12, f"{est.value.real!r}"
    est = integrate_quad(spec, lambda P: np.abs(P[:, 1]) ** 2, QuadratureRule(16, 32))
    ok = abs(est.value - math.pi ** 2 / 6) <= 1e-12
    yield "quadrature |w|^2", ok, f"{est.value.real!r}"
    f = lambda P: np.abs(P[:, 0]) ** 2 * P[:, 1] * np.conj(P[:, 1]) + P[:, 0] ** 2 * np.conj(P[:, 0])
    a = integrate_quad(spec, f, QuadratureRule(8, 16)).value
    b = integrate_quad(spec, f, QuadratureRule(16, 32)).value
    yield "order doubling", abs(a - b) <= 1e-13 * abs(b), f"rel {abs(a - b) / abs(b):.1e}"
    mc = integrate_mc(spec, f, seed, 200_000)
    yield "quadrature vs Monte Carlo", mc.within(b), f"{mc.value.real:.5f} vs {b.real:.5f}"


def suite_projection(seed):
    for spec in (hartogs_polydisc(1, 1), hartogs_ball(1, 2), hartogs_polydisc(2, 1)):
        rule = QuadratureRule(8, 4 * spec.k * spec.kn + 4)
        series = project_series(spec, conj_base_power(spec), 3 * spec.kn, rule)
        big = series.significant(1e-8)
        key = MultiIndex(-spec.kn, (0,) * spec.n)
        ok = list(big) == [key] and abs(big[key] - 1 / (spec.kn + 1)) <= 1e-8
        yield f"conj(z)^kn projection {spec}", ok, f"{len(big)} coefficient(s)"
        exact = project_conj_monomial(spec).coeffs[key]
        yield f"exact constant {spec}", abs(exact - Fraction(1, spec.kn + 1)) <= 1e-14, f"{exact.real!r}"
    spec = hartogs_polydisc(1, 1)
    est = project_kernel(spec, lambda P: P[:, 0] ** 2 * P[:, 1], (0.5, 0.1), seed, 400_000)
    yield "reproducing z^2 w", est.within(0.025), f"{est.value.real:.5f} +/- {est.std_error:.1e}"


def suite_lp(seed):
    ok = critical_interval(1, 1) == critical_interval(1, 1).__class__(Fraction(4, 3), Fraction(4))
    yield "classical interval (4/3, 4)", ok, str(critical_interval(1, 1))
    dual = all(1 / iv.p_low + 1 / iv.p_high == 1
               for iv in (critical_interval(n, k) for n in range(1, 7) for k in range(1, 7)))
    yield "Hölder-conjugate endpoints", dual, "n, k <= 6"
    grid = [Fraction(i, 7) for i in range(8, 50)]
    sym = all(is_bounded(p, n, k) == is_bounded(p / (p - 1), n, k)
              for n in range(1, 7) for k in range(1, 7) for p in grid)
    yield "duality symmetry", sym, "rational grid"
    flip = all((radial_lp_integral(p, n, k) < math.inf) == (p < Fraction(2 + 2 * n * k, n * k))
               for n in range(1, 4) for k in range(1, 4) for p in grid)
    yield "radial integral flips at p_high", flip, "rational grid"
    for n, k in NK_GRID:
        spec = hartogs_polydisc(n, k)
        est = mc_lp_norm(spec, 2, seed, 100_000)
        exact = lp_norm_closed(spec, 2)
        z = (est.value.real - exact) / est.std_error
        # |z|^{-2kn} has infinite variance under uniform sampling, so the 3 sigma band
        # under-covers for kn >= 2; gate only kn = 1 and report the rest
        passed = est.within(exact) if spec.kn == 1 else True
        label = f"L^2 norm {spec}" + ("" if spec.kn == 1 else " (report)")
        yield label, passed, f"{est.value.real:.4f} vs {exact:.4f} ({z:+.2f} sigma)"
    check = divergence_check(hartogs_polydisc(1, 1), 4, seed, 100_000)
    # reported only: at the endpoint the growth per quadrupling is below the noise
    yield ("endpoint growth p=4 (report)", True,
           f"gap {check.gap:.2f}, 3 sigma {3 * check.combined_sigma:.2f}, triggered {check.triggered}")


def suite_schur(seed):
    spec = hartogs_polydisc(1, 1)
    queries = query_grid(spec, np.linspace(0.3, 0.7, 5), np.linspace(0.0, 0.8, 5))
    a = schur_max(spec, 0.5, queries, seed, 100_000, stream=(2, 0))
    b = schur_max(spec, 0.5, queries, seed, 200_000, stream=(2, 1))
    ok = abs(a.value - b.value) <= 3 * math.hypot(a.std_error, b.std_error)
    yield "schur max stable eps=0.5", ok, f"{a.value:.3f} -> {b.value:.3f}"


SUITES = {
    "domains": suite_domains, "kernels": suite_kernels, "basis": suite_basis,
    "integrate": suite_integrate, "projection": suite_projection, "lp": suite_lp,
    "schur": suite_schur,
}


def run_suites(name: str = "all", seed: int = 0) -> list[CheckResult]:
    names = list(SUITES) if name == "all" else [name]
    results = []
    for suite in names:
        for check, passed, detail in SUITES[suite](seed):
            results.append(CheckResult(suite, check, bool(passed), detail))
    return results
