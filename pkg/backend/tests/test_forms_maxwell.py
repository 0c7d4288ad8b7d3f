"""
Tests for differential forms, Maxwell's equations and Yang-Mills curvature.
"""

import itertools

import pytest
import sympy as sp

from algebra import Element
from errors import DimOutOfRange, MixedMode
from forms import (
    SPACETIME,
    CoordinateSystem,
    DifferentialForm,
    commutative_coefficients,
    exterior_d,
    free_coefficients,
    partial_derivative,
    sort_basis,
    symbol,
    wedge,
)
from maxwell import (
    extract_fields,
    potential_form,
    weyl_maxwell_derivation,
    yang_mills_curvature_check,
)

PLANE = CoordinateSystem.indexed(2)
SPACE = CoordinateSystem(("x", "y", "z"))


@pytest.fixture
def commutative():
    return commutative_coefficients()


@pytest.fixture
def free():
    return free_coefficients()


@pytest.fixture(params=["commutative", "free"])
def ring(request):
    return request.getfixturevalue(request.param)


def inversions(items):
    return sum(1 for a, b in itertools.combinations(items, 2) if a > b)


@pytest.mark.unit
class TestCoordinates:
    def test_names(self):
        assert PLANE.labels == ("1", "2")
        assert PLANE.differential_name(0) == "dx1"
        assert SPACETIME.differential_name(3) == "dt"
        assert SPACETIME.dim == 4

    def test_symbols(self):
        assert PLANE.symbols == (sp.Symbol("x1"), sp.Symbol("x2"))
        assert SPACETIME.symbol(0) == sp.Symbol("x")

    def test_unknown_label(self):
        with pytest.raises(KeyError):
            SPACETIME.position("w")


@pytest.mark.unit
class TestBasisSign:
    def test_examples(self):
        assert sort_basis([1, 0]) == (-1, (0, 1))
        assert sort_basis([2, 0, 1]) == (1, (0, 1, 2))
        assert sort_basis([3]) == (1, (3,))
        assert sort_basis([]) == (1, ())

    def test_repeats_vanish(self):
        assert sort_basis([1, 1]) == (0, ())
        assert sort_basis([0, 2, 0]) == (0, ())

    @pytest.mark.parametrize("order", list(itertools.permutations(range(4))))
    def test_sign_is_the_parity(self, order):
        sign, basis = sort_basis(order)
        assert basis == (0, 1, 2, 3)
        assert sign == (-1) ** inversions(order)
        assert sort_basis(basis) == (1, basis)

    @pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
    def test_a_swap_flips_the_sign(self, order):
        swapped = (order[1], order[0]) + order[2:]
        assert sort_basis(swapped)[0] == -sort_basis(order)[0]


@pytest.mark.unit
class TestPartialDerivative:
    def test_leibniz_tagging(self):
        f, g = symbol("F"), symbol("G")
        result = partial_derivative(f * g, "x")
        assert result == symbol("F", partials=("x",)) * g + f * symbol(
            "G", partials=("x",)
        )

    def test_mixed_partials_commute(self):
        f = symbol("F")
        xy = partial_derivative(partial_derivative(f, "x"), "y")
        yx = partial_derivative(partial_derivative(f, "y"), "x")
        assert xy == yx

    def test_constants_vanish(self):
        assert partial_derivative(Element.one(), "x").is_zero()

    def test_sympy_partials(self, commutative):
        f = commutative.field(SPACETIME, "F")
        x, y = SPACETIME.symbol(0), SPACETIME.symbol(1)
        fx = commutative.partial(f, SPACETIME, 0)
        assert fx == sp.diff(f, x)
        assert commutative.partial(fx, SPACETIME, 1) == sp.diff(f, y, x)
        assert commutative.render(fx) == "F_{x}"
        assert commutative.render(sp.diff(f, y, x)) == "F_{x,y}"


@pytest.mark.unit
class TestForms:
    def test_wedge_is_graded(self, ring):
        dx = DifferentialForm.differential(PLANE, ring, "1")
        dy = DifferentialForm.differential(PLANE, ring, "2")
        assert wedge(dx, dx).is_zero()
        assert wedge(dx, dy) == -wedge(dy, dx)
        assert wedge(dx, dy).degrees() == (2,)

    def test_coefficient_sign(self, ring):
        dx = DifferentialForm.differential(PLANE, ring, "1")
        dy = DifferentialForm.differential(PLANE, ring, "2")
        f = ring.field(PLANE, "F")
        form = wedge(dx, dy).scale(f)
        assert form.coefficient("1", "2") == f
        assert form.coefficient("2", "1") == -f
        assert ring.is_zero(form.coefficient("1", "1"))

    def test_d_of_a_function(self, ring):
        f = ring.field(SPACETIME, "F") * ring.field(SPACETIME, "G")
        form = DifferentialForm.function(SPACETIME, ring, f)
        assert exterior_d(form).degrees() == (1,)
        assert exterior_d(exterior_d(form)).is_zero()

    def test_d_squared_on_the_potential(self, ring):
        lam = potential_form(ring)
        assert exterior_d(lam).degrees() == (2,)
        assert exterior_d(exterior_d(lam)).is_zero()

    def test_d_squared_on_two_and_three_forms(self, ring):
        f, g = ring.field(SPACETIME, "F"), ring.field(SPACETIME, "G")
        two = DifferentialForm(SPACETIME, ring, {(0, 1): f * g, (1, 3): g})
        three = DifferentialForm(SPACETIME, ring, {(0, 1, 2): f, (1, 2, 3): g * f})
        assert exterior_d(two).degrees() == (3,)
        assert exterior_d(exterior_d(two)).is_zero()
        assert exterior_d(three).degrees() == (4,)
        assert exterior_d(exterior_d(three)).is_zero()

    @pytest.mark.parametrize("degree", [0, 1, 2])
    def test_graded_leibniz(self, ring, degree):
        f, g, h = (ring.field(SPACE, name) for name in ("F", "G", "H"))
        first = {
            0: DifferentialForm.function(SPACE, ring, f),
            1: DifferentialForm.one_form(SPACE, ring, {"x": f, "y": h}),
            2: DifferentialForm(SPACE, ring, {(0, 1): f}),
        }[degree]
        second = DifferentialForm.one_form(SPACE, ring, {"y": g, "z": h * f})
        left = exterior_d(wedge(first, second))
        right = wedge(exterior_d(first), second) + wedge(
            first, exterior_d(second)
        ).scale((-1) ** degree)
        assert left == right

    def test_free_coefficients_do_not_commute(self, commutative, free):
        fg = DifferentialForm.function(PLANE, free, symbol("F"))
        gf = DifferentialForm.function(PLANE, free, symbol("G"))
        assert wedge(fg, gf) != wedge(gf, fg)
        f, g = commutative.field(PLANE, "F"), commutative.field(PLANE, "G")
        cf = DifferentialForm.function(PLANE, commutative, f)
        cg = DifferentialForm.function(PLANE, commutative, g)
        assert wedge(cf, cg) == wedge(cg, cf)

    def test_mixed_modes_are_rejected(self, commutative, free):
        a = DifferentialForm.differential(PLANE, commutative, "1")
        b = DifferentialForm.differential(PLANE, free, "1")
        with pytest.raises(MixedMode):
            wedge(a, b)
        with pytest.raises(MixedMode):
            a + b

    def test_coordinate_systems_must_match(self, ring):
        a = DifferentialForm.differential(PLANE, ring, "1")
        b = DifferentialForm.differential(SPACETIME, ring, "x")
        with pytest.raises(ValueError):
            a + b

    def test_rendering(self, commutative, free):
        assert str(DifferentialForm.zero(PLANE, commutative)) == "0"
        dx = DifferentialForm.differential(PLANE, commutative, "1")
        assert str(dx) == "(1) dx1"
        form = DifferentialForm.function(PLANE, free, symbol("A", 2))
        assert str(exterior_d(form)) == "(A[2]_{x1}) dx1 + (A[2]_{x2}) dx2"


@pytest.mark.unit
class TestMaxwell:
    def test_derivation_passes(self):
        report = weyl_maxwell_derivation()
        assert report.passed, report.render_text()
        identities = {r.identity for r in report.results}
        assert {
            "electric-field",
            "magnetic-field",
            "dd-lambda",
            "maxwell-div-b",
            "maxwell-faraday",
        } <= identities

    def test_corrected_transcription_is_noted(self):
        report = weyl_maxwell_derivation()
        (result,) = [r for r in report.results if r.identity == "dlambda-dxdz"]
        assert result.passed
        assert "H_x - F_z" in result.note

    def test_report_shows_the_derivation(self):
        lines = weyl_maxwell_derivation().lines
        assert lines[0].startswith("lambda = ")
        assert "F(x, y, z, t)" not in lines[0]
        assert any(line.startswith("rho := div E = ") for line in lines)
        assert "div B = 0" in lines

    def test_fields_from_potential(self, commutative):
        field = extract_fields(exterior_d(potential_form(commutative)))
        x, y = SPACETIME.symbol(0), SPACETIME.symbol(1)
        f, g = (commutative.field(SPACETIME, name) for name in ("F", "G"))
        assert field.magnetic[2] == sp.diff(g, x) - sp.diff(f, y)

    def test_fields_in_free_mode(self, free):
        field = extract_fields(exterior_d(potential_form(free)))
        assert field.magnetic[2] == symbol("G", partials=("x",)) - symbol(
            "F", partials=("y",)
        )


@pytest.mark.unit
class TestYangMills:
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_curvature_agrees(self, dim):
        report = yang_mills_curvature_check(dim)
        assert report.passed, report.render_text()

    def test_components_in_two_dimensions(self):
        report = yang_mills_curvature_check(2)
        identities = [r.identity for r in report.results]
        assert identities.count("yang-mills-component") == 1
        assert identities.count("yang-mills-commuting") == 1
        assert "yang-mills-commutator-curvature" in identities

    @pytest.mark.parametrize("dim", [0, 5])
    def test_dimension_limits(self, dim):
        with pytest.raises(DimOutOfRange):
            yang_mills_curvature_check(dim)
