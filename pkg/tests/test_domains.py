import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hartogs.domains import (
    DomainSpec, Kind, contains, hartogs_ball, hartogs_polydisc, interior_points, phi,
    phi_inv, phi_jacobian_det, point_from_json, point_to_json, sample, volume,
)
from hartogs.errors import ContractViolation, SingularPointError

from conftest import HARTOGS_SPECS, spec_id


def test_contains_examples():
    assert contains(hartogs_polydisc(1, 1), (0.5, 0.2))
    assert not contains(hartogs_polydisc(1, 1), (0.5, 0.6))
    assert contains(hartogs_ball(2, 1), (0.8, 0.5, 0.5))


def test_contains_boundary_is_excluded():
    assert not contains(hartogs_polydisc(1, 1), (0.5, 0.5))
    assert not contains(hartogs_polydisc(1, 2), (0.5, 0.25))
    assert not contains(hartogs_ball(2, 1), (0.5, 0.3, 0.4))
    assert not contains(hartogs_polydisc(1, 1), (0.0, 0.0))


def test_contains_dimension_mismatch():
    with pytest.raises(ContractViolation):
        contains(hartogs_polydisc(2, 1), (0.5, 0.1))


def test_contains_is_vectorised():
    spec = hartogs_polydisc(1, 1)
    out = contains(spec, [(0.5, 0.2), (0.5, 0.6)])
    assert out.tolist() == [True, False]


def test_volume_examples():
    assert volume(hartogs_polydisc(1, 1)) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)
    assert volume(hartogs_ball(1, 1)) == pytest.approx(math.pi ** 2 / 2, rel=1e-15)
    assert volume(DomainSpec(Kind.BALL, 1)) == pytest.approx(math.pi)
    assert volume(DomainSpec(Kind.UNIT_DISC)) == pytest.approx(math.pi)
    assert volume(DomainSpec(Kind.BALL, 2)) == pytest.approx(math.pi ** 2 / 2)


@pytest.mark.parametrize("spec", HARTOGS_SPECS, ids=spec_id)
def test_volume_matches_rejection_estimate(spec):
    # uniform points of the unit polydisc, keep those inside the domain
    rng = np.random.default_rng(3)
    m = 400_000
    box = np.sqrt(rng.random((m, spec.dim))) * np.exp(2j * np.pi * rng.random((m, spec.dim)))
    hits = contains(spec, box).astype(float)
    est = math.pi ** spec.dim * hits.mean()
    se = math.pi ** spec.dim * hits.std(ddof=1) / math.sqrt(m)
    assert abs(est - volume(spec)) <= 3 * se


def test_phi_examples():
    np.testing.assert_allclose(phi(hartogs_polydisc(1, 1), (0.5, 0.1)), [0.5, 0.2])
    np.testing.assert_allclose(phi(hartogs_polydisc(1, 2), (0.5, 0.1)), [0.5, 0.4])
    np.testing.assert_allclose(phi(hartogs_ball(2, 1), (0.5, 0.1j, 0.2)), [0.5, 0.2j, 0.4])


def test_phi_errors():
    with pytest.raises(SingularPointError):
        phi(hartogs_polydisc(1, 1), (0.0, 0.0))
    with pytest.raises(ContractViolation):
        phi(hartogs_polydisc(1, 1), (0.5, 0.6))
    with pytest.raises(ContractViolation):
        phi(DomainSpec(Kind.BALL, 2), (0.1, 0.1))


def test_phi_image_is_product_domain(hspec):
    u = phi(hspec, sample(hspec, 1, 5000).points)
    a = np.abs(u[:, 1:])
    if hspec.kind is Kind.HARTOGS_POLYDISC:
        assert np.all(a < 1)
    else:
        assert np.all(np.sum(a * a, axis=1) < 1)
    assert np.all((np.abs(u[:, 0]) > 0) & (np.abs(u[:, 0]) < 1))


def test_phi_round_trip(hspec):
    pts = sample(hspec, 0, 10_000).points
    np.testing.assert_allclose(phi_inv(hspec, phi(hspec, pts)), pts, atol=1e-13)


def test_jacobian_examples():
    assert phi_jacobian_det(hartogs_polydisc(1, 1), (0.5, 0.1)) == pytest.approx(2.0)
    assert phi_jacobian_det(hartogs_polydisc(1, 2), (0.5, 0.1)) == pytest.approx(4.0)
    assert phi_jacobian_det(hartogs_ball(2, 1), (0.5, 0.1, 0.1)) == pytest.approx(4.0)
    with pytest.raises(SingularPointError):
        phi_jacobian_det(hartogs_polydisc(1, 1), (0.0, 0.0))


def _fd_jacobian(spec, p, h=1e-6):
    # phi is holomorphic, so complex difference quotients give the complex Jacobian
    d = len(p)
    jac = np.empty((d, d), dtype=complex)
    for j in range(d):
        e = np.zeros(d, dtype=complex)
        e[j] = h
        jac[:, j] = (phi(spec, p + e, check=False) - phi(spec, p - e, check=False)) / (2 * h)
    return np.linalg.det(jac)


@pytest.mark.parametrize("spec", HARTOGS_SPECS, ids=spec_id)
def test_jacobian_matches_finite_differences(spec):
    for p in interior_points(spec, 0, 5):
        assert abs(_fd_jacobian(spec, p) - phi_jacobian_det(spec, p)) <= 1e-7 * abs(
            phi_jacobian_det(spec, p))


def test_sample_inside_and_deterministic(hspec):
    a = sample(hspec, 42, 20_000)
    b = sample(hspec, 42, 20_000)
    assert np.array_equal(a.points, b.points)
    assert np.all(contains(hspec, a.points))
    assert not np.array_equal(a.points, sample(hspec, 43, 20_000).points)
    assert not np.array_equal(a.points, sample(hspec, 42, 20_000, stream=1).points)


def test_sample_substreams_are_distinct():
    s = sample(hartogs_polydisc(1, 1), 0, 100)
    assert not np.array_equal(s.substream(0, 100).points, s.substream(1, 100).points)


def test_sample_second_moment():
    spec = hartogs_polydisc(1, 1)
    z2 = np.abs(sample(spec, 0, 200_000).points[:, 0]) ** 2
    se = z2.std(ddof=1) / math.sqrt(len(z2))
    assert abs(z2.mean() - 2 / 3) <= 3 * se


@pytest.mark.parametrize("spec", HARTOGS_SPECS, ids=spec_id)
def test_sample_fiber_is_uniform(spec):
    # after phi the fiber coordinate is uniform, so E|u_1|^2 is 1/2 (polydisc) or 1/(n+1) (ball)
    u = phi(spec, sample(spec, 5, 200_000).points, check=False)[:, 1]
    a = np.abs(u) ** 2
    target = 0.5 if spec.kind is Kind.HARTOGS_POLYDISC else 1 / (spec.n + 1)
    assert abs(a.mean() - target) <= 3 * a.std(ddof=1) / math.sqrt(len(a))


def test_sample_rejects_bad_count():
    with pytest.raises(ContractViolation):
        sample(hartogs_polydisc(1, 1), 0, 0)


def test_interior_points_respect_margins(hspec):
    pts = interior_points(hspec, 0, 2000, base_max=0.7, fiber_max=0.5)
    assert np.all(np.abs(pts[:, 0]) <= 0.7)
    ratio = np.abs(pts[:, 1:]) / np.abs(pts[:, :1]) ** hspec.k
    if hspec.kind is Kind.HARTOGS_POLYDISC:
        assert np.all(ratio <= 0.5 + 1e-12)
    else:
        assert np.all(np.linalg.norm(ratio, axis=1) <= 0.5 + 1e-12)


def test_spec_validation_and_json():
    with pytest.raises(ContractViolation):
        DomainSpec("Annulus", 1, 1)
    with pytest.raises(ContractViolation):
        DomainSpec(Kind.HARTOGS_BALL, 0, 1)
    with pytest.raises(ContractViolation):
        DomainSpec.from_json("{not json")
    spec = hartogs_ball(2, 3)
    assert DomainSpec.from_json(spec.to_json()) == spec
    assert DomainSpec(Kind.UNIT_DISC, 4, 7) == DomainSpec(Kind.UNIT_DISC)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=4))
def test_point_json_round_trip(coords):
    p = np.array([complex(a, b) for a, b in coords])
    assert np.array_equal(point_from_json(point_to_json(p)), p)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0, 2 * math.pi), st.floats(0.0, 0.99),
       st.floats(0, 2 * math.pi), st.integers(1, 3))
def test_contains_agrees_with_phi_image(r, t, f, s, k):
    spec = hartogs_polydisc(1, k)
    p = np.array([r * np.exp(1j * t), f * r ** k * np.exp(1j * s)])
    assert contains(spec, p)
    np.testing.assert_allclose(abs(phi(spec, p)[1]), f, atol=1e-12)
