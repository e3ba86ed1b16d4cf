import math
from fractions import Fraction

import numpy as np
import pytest

from hartogs.basis import MultiIndex
from hartogs.domains import hartogs_ball, hartogs_polydisc, interior_points
from hartogs.errors import ContractViolation, IntegrationError
from hartogs.integrate import QuadratureRule
from hartogs.projection import (
    SeriesFunction, conj_base_power, conj_monomial_constant, mc_inner, project_conj_monomial,
    project_kernel, project_series,
)

from conftest import HARTOGS_SPECS, spec_id

OMEGA1 = hartogs_polydisc(1, 1)


def test_project_holomorphic_monomial():
    series = project_series(OMEGA1, lambda P: P[:, 0] ** 2 * P[:, 1], 3, QuadratureRule(8, 16))
    big = series.significant(1e-10)
    assert list(big) == [MultiIndex(2, (1,))]
    assert big[MultiIndex(2, (1,))] == pytest.approx(1, abs=1e-10)


def test_project_conj_z():
    series = project_series(OMEGA1, lambda P: np.conj(P[:, 0]), 3, QuadratureRule(8, 16))
    big = series.significant(1e-10)
    assert list(big) == [MultiIndex(-1, (0,))]
    assert big[MultiIndex(-1, (0,))] == pytest.approx(0.5, abs=1e-10)


def test_project_constant(hspec):
    series = project_series(hspec, lambda P: np.ones(len(P)), hspec.kn + 1,
                            QuadratureRule(8, 4 * hspec.k * hspec.kn + 4))
    big = series.significant(1e-10)
    key = MultiIndex(0, (0,) * hspec.n)
    assert list(big) == [key]
    assert big[key] == pytest.approx(1, abs=1e-10)


@pytest.mark.parametrize("spec,expected", [
    (hartogs_polydisc(1, 1), Fraction(1, 2)), (hartogs_polydisc(2, 1), Fraction(1, 3)),
    (hartogs_ball(2, 2), Fraction(1, 5)),
], ids=["omega1", "omega1-n2", "h2-n2"])
def test_conj_monomial_exact(spec, expected):
    assert conj_monomial_constant(spec) == expected
    series = project_conj_monomial(spec)
    key = MultiIndex(-spec.kn, (0,) * spec.n)
    assert list(series.coeffs) == [key]
    assert series.coeffs[key] == pytest.approx(float(expected), rel=1e-14)


def test_conj_monomial_series_matches_exact(hspec):
    rule = QuadratureRule(8, 4 * hspec.k * hspec.kn + 4)
    series = project_series(hspec, conj_base_power(hspec), 2 * hspec.kn, rule)
    big = series.significant(1e-9)
    key = MultiIndex(-hspec.kn, (0,) * hspec.n)
    assert list(big) == [key]
    assert abs(big[key] - 1 / (hspec.kn + 1)) <= 1e-10


def test_project_series_rejects_nonfinite():
    with pytest.raises(IntegrationError):
        project_series(OMEGA1, lambda P: np.full(len(P), np.nan), 1, QuadratureRule(4, 4))


def test_project_kernel_examples():
    est = project_kernel(OMEGA1, lambda P: P[:, 0] ** 2 * P[:, 1], (0.5, 0.1), 0, 10 ** 6)
    assert est.within(0.025)
    est = project_kernel(OMEGA1, conj_base_power(OMEGA1), (0.5, 0.1), 0, 10 ** 6)
    assert est.within(1.0)


def test_project_kernel_constant(hspec):
    p = interior_points(hspec, 1, 1, 0.6, 0.6)[0]
    assert project_kernel(hspec, lambda P: np.ones(len(P)), p, 0, 200_000).within(1)


def test_project_kernel_batch_and_contract():
    P = interior_points(OMEGA1, 0, 3, 0.6, 0.6)
    ests = project_kernel(OMEGA1, lambda P: np.ones(len(P)), P, 0, 10_000)
    assert len(ests) == 3
    with pytest.raises(ContractViolation):
        project_kernel(OMEGA1, lambda P: np.ones(len(P)), (0.5, 0.6))


def test_series_function_json_round_trip(hspec):
    coeffs = {MultiIndex(-hspec.kn, (0,) * hspec.n): 0.25 - 1j, MultiIndex(1, (1,) * hspec.n): 2.0}
    f = SeriesFunction(hspec, coeffs)
    g = SeriesFunction.from_json(hspec, f.to_json())
    assert g.coeffs == f.coeffs
    p = interior_points(hspec, 0, 4)
    np.testing.assert_allclose(f(p), g(p))


def test_series_function_rejects_inadmissible():
    with pytest.raises(ContractViolation):
        SeriesFunction(OMEGA1, {MultiIndex(-2, (0,)): 1})
    with pytest.raises(ContractViolation):
        SeriesFunction.from_json(OMEGA1, "[{}]")


def test_mc_inner_orthogonality():
    e1 = lambda P: P[:, 0]
    e2 = lambda P: P[:, 1]
    assert mc_inner(OMEGA1, e1, e2, 0, 200_000).within(0)
