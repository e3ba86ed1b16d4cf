import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartogs.domains import DomainSpec, Kind, hartogs_ball, hartogs_polydisc, interior_points
from hartogs.errors import ContractViolation, ConvergenceError, PoleError
from hartogs.kernels import kernel_closed, kernel_series, kernel_via_transform

from conftest import HARTOGS_SPECS, spec_id


def test_elementary_kernel_examples():
    assert kernel_closed(DomainSpec(Kind.UNIT_DISC), 0, 0) == pytest.approx(1 / math.pi, rel=1e-15)
    assert kernel_closed(DomainSpec(Kind.BALL, 2), (0, 0), (0, 0)) == pytest.approx(
        2 / math.pi ** 2, rel=1e-15)
    assert kernel_closed(DomainSpec(Kind.POLYDISC, 2), (0, 0), (0, 0)) == pytest.approx(
        1 / math.pi ** 2, rel=1e-15)


def test_hartogs_ball_example():
    value = kernel_closed(hartogs_ball(1, 1), (0.5, 0.1), (0.5, 0.1))
    assert value.real == pytest.approx(0.25 / (math.pi ** 2 * 0.5625 * 0.0576), rel=1e-14)
    assert value.real == pytest.approx(0.78181, abs=1e-4)
    assert abs(value.imag) < 1e-15


def test_omega_and_h_agree_for_n1():
    p, q = (0.5, 0.1), (0.4 + 0.2j, -0.05j)
    for k in (1, 2, 3):
        assert kernel_closed(hartogs_polydisc(1, k), p, q) == pytest.approx(
            kernel_closed(hartogs_ball(1, k), p, q), rel=1e-14)


@pytest.mark.parametrize("spec", [hartogs_polydisc(1, 1), hartogs_ball(1, 1)], ids=spec_id)
def test_series_example(spec):
    p = (0.5, 0.1)
    closed = kernel_closed(spec, p, p)
    assert abs(kernel_series(spec, p, p, tol=1e-8) - closed) <= 1e-6 * abs(closed)


@pytest.mark.parametrize("spec", HARTOGS_SPECS, ids=spec_id)
def test_series_matches_closed_form(spec):
    P = interior_points(spec, 11, 15, stream=0)
    Q = interior_points(spec, 11, 15, stream=1)
    for p, q in zip(P, Q):
        closed = kernel_closed(spec, p, q)
        assert abs(kernel_series(spec, p, q) - closed) <= 1e-6 * abs(closed)


def test_series_without_factorial_would_fail():
    # H_k for n = 2: the closed form carries n! = 2; the series confirms it
    spec = hartogs_ball(2, 1)
    p, q = (0.5, 0.1, 0.05j), (0.6, -0.1, 0.1)
    ratio = kernel_series(spec, p, q) / kernel_closed(spec, p, q)
    assert abs(ratio - 1) < 1e-6


def test_series_pole_and_contracts():
    spec = hartogs_polydisc(1, 1)
    with pytest.raises(PoleError):
        kernel_series(spec, (0.5, 0.1), (0.0, 0.0))
    with pytest.raises(ContractViolation):
        kernel_series(spec, (0.5, 0.1), (0.5, 0.1), tol=0)
    with pytest.raises(ContractViolation):
        kernel_series(DomainSpec(Kind.UNIT_DISC), 0.1, 0.1)


def test_series_reports_non_convergence():
    spec = hartogs_polydisc(1, 1)
    p = (0.999, 0.99)
    with pytest.raises(ConvergenceError):
        kernel_series(spec, p, p, max_shells=20)


@pytest.mark.parametrize("spec,p,q", [
    (hartogs_polydisc(1, 1), (0.5, 0.1), (0.5, 0.1)),
    (hartogs_ball(2, 1), (0.6, 0.1, 0.2j), (0.5, 0.05, 0.1)),
    (hartogs_polydisc(1, 2), (0.7, 0.2), (0.7, 0.2)),
], ids=["omega1", "h1-n2", "omega2"])
def test_transform_examples(spec, p, q):
    closed = kernel_closed(spec, p, q)
    assert abs(kernel_via_transform(spec, p, q) - closed) <= 1e-12 * abs(closed)


def test_transform_batch(hspec):
    P = interior_points(hspec, 2, 500, 0.95, 0.95, stream=0)
    Q = interior_points(hspec, 2, 500, 0.95, 0.95, stream=1)
    a, b = kernel_via_transform(hspec, P, Q), kernel_closed(hspec, P, Q)
    assert np.max(np.abs(a - b) / np.abs(b)) <= 1e-10


def test_hermitian_and_positive_diagonal(hspec):
    P = interior_points(hspec, 3, 500, 0.95, 0.95, stream=0)
    Q = interior_points(hspec, 3, 500, 0.95, 0.95, stream=1)
    np.testing.assert_allclose(kernel_closed(hspec, P, Q), np.conj(kernel_closed(hspec, Q, P)),
                               rtol=1e-13)
    diag = kernel_closed(hspec, P, P)
    assert np.all(diag.real > 0)
    assert np.all(np.abs(diag.imag) <= 1e-13 * diag.real)


def test_single_point_broadcasts_against_batch(hspec):
    P = interior_points(hspec, 4, 10)
    batch = kernel_closed(hspec, P[0], P)
    singles = [kernel_closed(hspec, P[0], q) for q in P]
    np.testing.assert_allclose(batch, singles, rtol=1e-15)


def test_mismatched_batches_rejected():
    spec = hartogs_polydisc(1, 1)
    P = interior_points(spec, 0, 3)
    with pytest.raises(ContractViolation):
        kernel_closed(spec, P, P[:2])


def test_exterior_point_rejected():
    with pytest.raises(ContractViolation):
        kernel_closed(hartogs_polydisc(1, 1), (0.5, 0.6), (0.5, 0.1))


def test_base_zero_is_a_pole():
    spec = hartogs_polydisc(1, 1)
    with pytest.raises(PoleError):
        kernel_closed(spec, (0.0, 0.0), (0.5, 0.1), check=False)


@pytest.mark.parametrize("spec", HARTOGS_SPECS, ids=spec_id)
def test_diagonal_blows_up_towards_outer_boundary(spec):
    # along |z| -> 1 at a fixed fiber ratio the diagonal increases once r^2 > kn/(kn+2)
    radii = np.linspace(0.85, 0.999, 40)
    frac = 0.3 / math.sqrt(spec.n) if spec.kind is Kind.HARTOGS_BALL else 0.3
    pts = np.array([[r] + [frac * r ** spec.k] * spec.n for r in radii], dtype=complex)
    diag = kernel_closed(spec, pts, pts).real
    assert np.all(np.diff(diag) > 0)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0, 2 * math.pi), st.floats(0, 0.95), st.floats(0, 2 * math.pi),
       st.floats(0.05, 0.95), st.floats(0, 2 * math.pi), st.floats(0, 0.95), st.floats(0, 2 * math.pi),
       st.integers(1, 3))
def test_transform_law_property(r1, a1, f1, b1, r2, a2, f2, b2, k):
    spec = hartogs_polydisc(1, k)
    p = np.array([r1 * np.exp(1j * a1), f1 * r1 ** k * np.exp(1j * b1)])
    q = np.array([r2 * np.exp(1j * a2), f2 * r2 ** k * np.exp(1j * b2)])
    closed = kernel_closed(spec, p, q)
    assert abs(kernel_via_transform(spec, p, q) - closed) <= 1e-10 * abs(closed)
