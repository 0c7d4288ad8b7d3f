"""
Tests for derivations and the commutator-geometry identity checks.
"""

import pytest

from algebra import Element
from derivations import (
    BRACKET_LEFT,
    Derivation,
    apply,
    connection_table,
    curvature_table,
    dual_partial,
    formal_partial,
    metric,
    partial,
    time_derivative,
    velocity,
)
from errors import DimOutOfRange, LengthOutOfRange
from geometry_checks import (
    bianchi_check,
    classical_christoffel_check,
    curvature_formula_check,
    curvature_operator_check,
    derivation_of_bracket_check,
    fdot_symmetrized_check,
    flat_partials_check,
    hamilton_check,
    levi_civita_corollary_check,
    levi_civita_free_identity,
    metric_lemma_check,
    quantum_hamilton_check,
    weyl_connection_identity,
)
from models import CheckResult
from scalars import Scalar
from worlds import flat_world, normalize


def identities(report):
    return {result.identity for result in report.results}


@pytest.mark.unit
class TestDerivations:
    def test_partials_are_commutators(self, flat2):
        x1, p1, x2 = flat2.gen("X", 1), flat2.gen("P", 1), flat2.gen("X", 2)
        assert apply(partial(flat2, 1), x1, flat2) == Element.one()
        assert apply(partial(flat2, 1), x2, flat2).is_zero()
        assert apply(dual_partial(flat2, 1), p1, flat2) == Element.one()
        assert apply(partial(flat2, 1), x1 * x1, flat2) == x1 * 2

    def test_left_bracket(self, flat2):
        d = Derivation(BRACKET_LEFT, flat2.gen("X", 1))
        assert d.raw(flat2.gen("P", 1)) == flat2.gen("X", 1) * flat2.gen(
            "P", 1
        ) - flat2.gen("P", 1) * flat2.gen("X", 1)

    def test_unknown_kind(self, flat2):
        with pytest.raises(ValueError):
            Derivation("sideways", flat2.gen("X", 1))

    def test_quantum_time_derivative(self, flat2):
        p1 = flat2.gen("P", 1)
        d_t = time_derivative(p1 * p1 * Scalar.rational(1, 2), quantum=True)
        assert str(d_t) == "D_q"
        xdot = apply(d_t, flat2.gen("X", 1), flat2)
        factor = -Scalar.imaginary() * Scalar.param("hbar", -1)
        assert xdot == p1 * factor

    def test_velocity_and_metric_with_potential(self, potential2):
        assert velocity(potential2, 1) == potential2.gen("P", 1)
        assert metric(potential2, 1, 1) == Element.one()
        assert metric(potential2, 1, 2).is_zero()

    def test_gauge_velocity_uses_macro(self, gauge2):
        assert velocity(gauge2, 2) == gauge2.macro("Xdot", 2)

    def test_formal_partial_follows_the_product_rule(self, flat2):
        x1, p1 = flat2.generator("X", 1), flat2.generator("P", 1)
        word = Element.word(x1, p1, x1)
        assert formal_partial(word, x1) == Element.word(p1, x1) + Element.word(
            x1, p1
        )
        assert formal_partial(word, flat2.generator("X", 2)).is_zero()


@pytest.mark.unit
class TestTables:
    def test_curvature_table_is_antisymmetric(self, gauge2):
        table = curvature_table(2, gauge2)
        assert table[(1, 1)].is_zero()
        assert not table[(1, 2)].is_zero()
        residuals = table.antisymmetry_residuals(gauge2)
        assert residuals and all(r.is_zero() for r in residuals.values())

    def test_connection_vanishes_for_potential_hamiltonian(self, potential2):
        table = connection_table(2, potential2)
        assert list(table.triples())[0] == (1, 1, 1)
        assert all(table[t].is_zero() for t in table.triples())


@pytest.mark.unit
class TestHamilton:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_default_hamiltonians(self, dim):
        report = hamilton_check(flat_world(dim))
        assert report.passed, report.render_text()
        assert identities(report) == {"hamilton-p", "hamilton-x"}

    def test_user_hamiltonian(self, flat2):
        x1, p2 = flat2.gen("X", 1), flat2.gen("P", 2)
        report = hamilton_check(flat2, [x1 * x1 * x1 * p2 * p2])
        assert report.passed
        assert len(report.results) == 4

    def test_quantum_form(self):
        report = quantum_hamilton_check(2)
        assert report.passed
        assert "quantum-ihbar-xdot" in identities(report)

    def test_flat_partials(self):
        report = flat_partials_check(2, maxlen=2)
        assert report.passed
        assert "flat-commuting-partials" in identities(report)


@pytest.mark.unit
class TestCurvature:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_curvature_formula(self, dim):
        report = curvature_formula_check(dim, maxlen=1)
        assert report.passed, report.render_text()
        assert {
            "curvature-formula",
            "curvature-flat-limit",
            "curvature-operator",
            "curvature-antisymmetry",
            "gauge-metric",
        } <= identities(report)

    def test_operator_form_in_the_free_algebra(self):
        assert curvature_operator_check(maxlen=2).passed

    def test_dimension_limits(self):
        with pytest.raises(DimOutOfRange):
            curvature_formula_check(0)


@pytest.mark.unit
class TestMetric:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_metric_lemma(self, dim):
        report = metric_lemma_check(dim)
        assert report.passed, report.render_text()

    def test_flat_limit_only_in_one_dimension(self):
        assert any(
            r.identity.startswith("metric-flat-limit")
            for r in metric_lemma_check(1).results
        )
        assert not any(
            r.identity.startswith("metric-flat-limit")
            for r in metric_lemma_check(2).results
        )

    def test_fdot_symmetrized(self):
        report = fdot_symmetrized_check(2, maxlen=2)
        assert report.passed
        assert len(report.results) == 4 + 16

    def test_dimension_limits(self):
        with pytest.raises(DimOutOfRange):
            metric_lemma_check(9)


@pytest.mark.unit
class TestConnections:
    @pytest.mark.parametrize("dim", [1, 2])
    def test_levi_civita_free(self, dim):
        report = levi_civita_free_identity(dim)
        assert report.passed, report.render_text()
        assert len(report.results) == 2 * dim**3

    def test_levi_civita_corollary(self):
        report = levi_civita_corollary_check(2)
        assert report.passed
        assert "levi-civita-corollary-no-potential" in identities(report)

    @pytest.mark.parametrize("dim", [1, 2])
    def test_weyl_connection(self, dim):
        report = weyl_connection_identity(dim)
        assert report.passed, report.render_text()
        assert {"weyl-connection", "weyl-connection-free"} <= identities(report)

    def test_derivation_of_bracket(self):
        report = derivation_of_bracket_check(2)
        assert report.passed
        assert "derivative-of-metric" in identities(report)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_classical_christoffel(self, dim):
        report = classical_christoffel_check(dim)
        assert report.passed, report.render_text()
        assert len(report.results) == 2 * dim**3


@pytest.mark.unit
class TestBianchi:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_bianchi_from_jacobi(self, n):
        report = bianchi_check(n)
        assert report.passed
        assert len(report.results) == n**3
        assert report.summary == f"bianchi: {n**3}/{n**3} passed"


@pytest.mark.unit
class TestArgumentRanges:
    @pytest.mark.parametrize(
        "check",
        [
            levi_civita_free_identity,
            derivation_of_bracket_check,
            bianchi_check,
            classical_christoffel_check,
        ],
    )
    @pytest.mark.parametrize("dim", [0, -1, 9])
    def test_dimension_outside_range(self, check, dim):
        with pytest.raises(DimOutOfRange):
            check(dim)

    @pytest.mark.parametrize(
        "check",
        [
            lambda: flat_partials_check(1, maxlen=0),
            lambda: curvature_formula_check(2, maxlen=0),
            lambda: curvature_operator_check(maxlen=0),
            lambda: fdot_symmetrized_check(1, maxlen=-2),
        ],
    )
    def test_word_length_must_be_positive(self, check):
        with pytest.raises(LengthOutOfRange):
            check()


@pytest.mark.unit
class TestReports:
    def test_passing_result_text(self, flat2):
        residual = normalize(
            flat2.gen("X", 1) * flat2.gen("P", 1)
            - flat2.gen("P", 1) * flat2.gen("X", 1)
            - 1,
            flat2,
        )
        result = CheckResult.of("ccr", residual, flat2, (1, 1))
        assert result.render_text() == "PASS ccr (1,1) residual=0"

    def test_failing_result_text(self, flat2):
        result = CheckResult.of("ccr", Element.one(), flat2, subject="X[1]", note="n")
        assert not result.passed
        assert result.render_text() == "FAIL ccr F=X[1] residual=1  # n"

    def test_controls_pass_when_nonzero(self):
        assert CheckResult.of("control", Element.one(), expect_zero=False).passed

    def test_report_summary(self):
        report = bianchi_check(2)
        text = report.render_text()
        assert text.splitlines()[-1] == "summary: bianchi: 8/8 passed"
        assert report.model_dump()["passed"] is True
