"""
Tests for worlds: relation orientation, admissibility and normal forms.
"""

from fractions import Fraction

import pytest

from algebra import Element, Generator, commutator
from errors import (
    AdmissibilityError,
    DimOutOfRange,
    EmptyGeneratorList,
    UnknownGenerator,
)
from worlds import (
    RewriteRule,
    World,
    WorldBuilder,
    commutative_world,
    commuting_coordinates_world,
    flat_world,
    free_world,
    normalize,
    potential_world,
    render,
    words_up_to,
)

A = Generator("A")
B = Generator("B")


@pytest.mark.unit
class TestFlatWorld:
    def test_canonical_commutation(self, flat2):
        x1, x2 = flat2.gen("X", 1), flat2.gen("X", 2)
        p1, p2 = flat2.gen("P", 1), flat2.gen("P", 2)
        assert normalize(commutator(x1, p1), flat2) == Element.one()
        assert normalize(commutator(p1, x1), flat2) == -Element.one()
        assert normalize(commutator(x1, p2), flat2).is_zero()
        assert normalize(commutator(x1, x2), flat2).is_zero()
        assert normalize(commutator(p1, p2), flat2).is_zero()

    def test_normal_form_sorts_x_before_p(self, flat2):
        p1, x1 = flat2.gen("P", 1), flat2.gen("X", 1)
        assert render(normalize(p1 * x1, flat2), flat2) == "X[1]*P[1] - 1"

    def test_normal_form_is_idempotent(self, flat2):
        p1, x1 = flat2.gen("P", 1), flat2.gen("X", 1)
        once = normalize(p1 * p1 * x1 * x1, flat2)
        assert normalize(once, flat2) == once

    def test_normalize_rejects_unknown_strategy(self, flat2):
        with pytest.raises(ValueError):
            normalize(flat2.gen("X", 1), flat2, "middle")

    def test_unknown_generator(self, flat2):
        with pytest.raises(UnknownGenerator):
            flat2.generator("Q", 1)
        with pytest.raises(UnknownGenerator):
            normalize(Element.gen(Generator("X", (3,))), flat2)

    def test_dimension_limits(self):
        with pytest.raises(DimOutOfRange):
            flat_world(0)
        with pytest.raises(DimOutOfRange):
            flat_world(9)

    def test_builders_are_deterministic(self):
        assert flat_world(3) == flat_world(3)
        assert flat_world(2) != flat_world(3)


@pytest.mark.unit
class TestOtherBuilders:
    def test_metric_is_symmetric_and_central(self, metric2):
        assert metric2.generator("g", 2, 1) is Generator("g", (1, 2))
        g12, x1 = metric2.gen("g", 1, 2), metric2.gen("X", 1)
        assert normalize(x1 * g12, metric2) == g12 * x1

    def test_metric_hamiltonian(self, metric2):
        h = metric2.macro("H")
        assert h.coefficient(
            (Generator("g", (1, 1)), Generator("P", (1,)), Generator("P", (1,)))
        ) == Fraction(1, 2)
        assert h.coefficient(
            (Generator("g", (1, 2)), Generator("P", (1,)), Generator("P", (2,)))
        ) == Fraction(1)

    def test_gauge_velocity_macro(self, gauge2):
        assert gauge2.macro("Xdot", 1) == gauge2.gen("P", 1) - gauge2.gen("A", 1)
        assert gauge2.has_macro("Xdot", (2,))
        assert not gauge2.has_macro("Xdot", (3,))

    def test_potential_commutes_with_positions_only(self, potential2):
        v = potential2.gen("V")
        x1, p1 = potential2.gen("X", 1), potential2.gen("P", 1)
        assert normalize(commutator(v, x1), potential2).is_zero()
        assert not normalize(commutator(p1, v), potential2).is_zero()

    def test_commuting_coordinates(self):
        world = commuting_coordinates_world(2)
        x1, x2, h = world.gen("X", 1), world.gen("X", 2), world.gen("H")
        assert normalize(commutator(x1, x2), world).is_zero()
        assert not normalize(commutator(x1, h), world).is_zero()

    def test_commutative_world_sorts_letters(self):
        world = commutative_world()
        b_a = Element.word(B, A)
        assert normalize(b_a - Element.word(A, B), world).is_zero()

    def test_free_world_has_no_rules(self):
        world = free_world([A, B])
        assert not world.rules
        bracket = commutator(Element.gen(A), Element.gen(B))
        assert not normalize(bracket, world).is_zero()

    def test_free_world_needs_generators(self):
        with pytest.raises(EmptyGeneratorList):
            free_world([])


@pytest.mark.unit
class TestAdmissibility:
    def test_ascending_left_side_is_rejected(self):
        builder = WorldBuilder("bad", 1)
        a, b = builder.declare("A"), builder.declare("B")
        builder.rule((a, b), Element.word(b, a))
        with pytest.raises(AdmissibilityError) as info:
            builder.build()
        assert "descending" in str(info.value)

    def test_growing_right_side_is_rejected(self):
        builder = WorldBuilder("bad", 1)
        a, b = builder.declare("A"), builder.declare("B")
        builder.rule((b, a), Element.word(a, b, a))
        with pytest.raises(AdmissibilityError):
            builder.build()

    def test_conflicting_rules_are_rejected(self):
        builder = WorldBuilder("bad", 1)
        a, b = builder.declare("A"), builder.declare("B")
        builder.relate(a, b, Element.one())
        builder.relate(a, b, Element.zero())
        with pytest.raises(AdmissibilityError):
            builder.build()

    def test_nonzero_self_commutator_is_rejected(self):
        builder = WorldBuilder("bad", 1)
        a = builder.declare("A")
        builder.relate(a, a, Element.one())
        with pytest.raises(AdmissibilityError):
            builder.build()

    def test_undeclared_letter_is_rejected(self):
        with pytest.raises(AdmissibilityError):
            World("bad", 1, [A], [RewriteRule((A, B), Element.zero())])

    def test_order_decides_orientation(self):
        builder = WorldBuilder("ordered", 1)
        a, b = builder.declare("A"), builder.declare("B")
        builder.commute(a, b)
        builder.order = [b, a]
        world = builder.build()
        assert (a, b) in world.rules
        assert normalize(Element.word(a, b), world) == Element.word(b, a)


@pytest.mark.unit
class TestConfluence:
    @pytest.mark.parametrize("builder", [flat_world, potential_world])
    def test_leftmost_and_rightmost_agree(self, builder):
        world = builder(2)
        for word in words_up_to(world.generators, 3):
            element = Element.word(*word)
            assert normalize(element, world, "leftmost") == normalize(
                element, world, "rightmost"
            )

    def test_words_up_to_counts(self):
        assert len(words_up_to([A, B], 2)) == 7
        assert words_up_to([A], 0) == [()]
