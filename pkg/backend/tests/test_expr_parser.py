"""
Tests for the expression parser and canonical printer.
"""

import pytest

from errors import ExprSyntaxError
from expr_parser import (
    Add,
    Bracket,
    Delta,
    Imaginary,
    Index,
    Mul,
    Name,
    Neg,
    Number,
    Partial,
    Pow,
    Sub,
    TimeDerivative,
    parse_expr,
    print_expr,
    schematic_variables,
)

X1 = Name("X", (Index(None, 1),))
P1 = Name("P", (Index(None, 1),))

# Every grammar production appears at least once
CORPUS = [
    "0",
    "1",
    "42",
    "i",
    "H",
    "X[1]",
    "g[1,2]",
    "Gamma[3,1,2]",
    "X[n]",
    "X[n+1]",
    "X[n-1]",
    "g[i,j]",
    "F_{x}",
    "A[1]_{x,y}",
    "A[j]_{2}",
    "X[1] + P[1]",
    "X[1] - P[1]",
    "X[1]*P[1]",
    "X[1]*P[2] - P[2]*X[1]",
    "X[1]/2",
    "1/2*P[1]*P[1]",
    "(1/2)*(P[1]^2 + P[2]^2)",
    "-X[1]",
    "--X[1]",
    "-X[1]*P[1]",
    "X[1]*-P[1]",
    "X[1] - -P[1]",
    "X[1]^2",
    "tau^-1",
    "(X[1] + P[1])^3",
    "(-X[1])^2",
    "[X[1],P[1]]",
    "[X[1],X[2]]",
    "[[X[1],H],H]",
    "[X[1],[X[2],[X[3],H]]]",
    "[X[1] + P[1],A*B]",
    "[[A,B],C] + [[B,C],A] + [[C,A],B]",
    "[Xdot[1],Xdot[2]]",
    "D X[1]",
    "D D X[1]",
    "D (X[1]*P[1])",
    "D [X[1],H]",
    "-D X[1]",
    "d/dX[1] X[1]",
    "d/dP[2] (P[2]*P[2])",
    "d/dX[1] d/dX[2] F",
    "d/dX[i] A[j]",
    "delta(1,2)",
    "delta(i,j)",
    "delta(i,j+1)*X[i]",
    "i*hbar*D X[1]",
    "(X[1] - P[1])*(X[1] + P[1])",
    "X[1]*(P[1]*X[1])",
    "A - (B - C)",
    "A - (B + C)",
    "(A + B) + C",
    "A + (B + C)",
    "2*i*A",
    "h^-2*(J - 1)",
    "[A,B]^2",
    "Lambda[1]*F - F*Lambda[1]",
]


@pytest.mark.unit
class TestParsing:
    def test_commutator_of_generators(self):
        assert parse_expr("[X[1],P[1]]") == Bracket(X1, P1)

    def test_difference_of_products(self):
        expr = parse_expr("X[1]*P[2] - P[2]*X[1]")
        assert isinstance(expr, Sub)
        assert isinstance(expr.left, Mul)
        assert isinstance(expr.right, Mul)

    def test_nested_commutator(self):
        h = Name("H")
        assert parse_expr("[[X[1],H],H]") == Bracket(Bracket(X1, h), h)

    def test_precedence(self):
        expr = parse_expr("A + B*C")
        assert isinstance(expr, Add)
        assert isinstance(expr.right, Mul)
        assert parse_expr("-A*B") == Mul(Neg(Name("A")), Name("B"))
        assert parse_expr("-A^2") == Neg(Pow(Name("A"), 2))

    def test_left_associativity(self):
        expr = parse_expr("A - B - C")
        assert expr == Sub(Sub(Name("A"), Name("B")), Name("C"))

    def test_reserved_words(self):
        assert parse_expr("i") == Imaginary()
        assert parse_expr("delta(1,n)") == Delta(Index(None, 1), Index("n"))
        assert parse_expr("D H") == TimeDerivative(Name("H"))

    def test_partial_derivative(self):
        expr = parse_expr("d/dX[1] F")
        assert expr == Partial(X1, Name("F"))

    def test_partial_labels_are_sorted(self):
        assert parse_expr("F_{y,x}") == Name("F", (), ("x", "y"))

    def test_schematic_indices(self):
        expr = parse_expr("X[n+1]*J")
        assert expr.left == Name("X", (Index("n", 1),))
        assert schematic_variables(parse_expr("X[n]*J + delta(i,n+1)")) == ["n", "i"]

    def test_numbers(self):
        assert parse_expr("12") == Number(12)


@pytest.mark.unit
class TestRoundTrip:
    def test_corpus_is_large_enough(self):
        assert len(CORPUS) >= 50

    @pytest.mark.parametrize("text", CORPUS)
    def test_print_is_a_fixed_point(self, text):
        printed = print_expr(parse_expr(text))
        assert print_expr(parse_expr(printed)) == printed

    @pytest.mark.parametrize("text", CORPUS)
    def test_parse_inverts_print(self, text):
        expr = parse_expr(text)
        assert parse_expr(print_expr(expr)) == expr

    def test_canonical_spelling(self):
        assert print_expr(parse_expr("[ X[1] , P[1] ]")) == "[X[1],P[1]]"
        assert print_expr(parse_expr("(A*B)")) == "A*B"
        assert print_expr(parse_expr("A*(B*C)")) == "A*(B*C)"
        assert print_expr(parse_expr("A-(B+C)")) == "A - (B + C)"
        assert print_expr(parse_expr("D(X[1]*P[1])")) == "D (X[1]*P[1])"


@pytest.mark.unit
class TestSyntaxErrors:
    def test_unexpected_end(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("[X[1],")
        error = info.value
        assert (error.line, error.column) == (1, 7)
        assert "name" in error.expected
        assert "integer" in error.expected

    def test_unexpected_character(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("X[1] $ 2")
        assert info.value.column == 6
        assert "'$'" in str(info.value)

    def test_empty_expression(self):
        with pytest.raises(ExprSyntaxError, match="empty expression"):
            parse_expr("   ")

    def test_juxtaposition_is_rejected(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("X[1] X[2]")
        assert info.value.column == 6
        caret_line = info.value.caret().splitlines()[1]
        assert caret_line.index("^") == 2 + 5

    def test_missing_bracket_close(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("[A,B")
        assert "']'" in info.value.expected

    def test_partial_needs_a_generator(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("d/di X[1]")

    def test_line_and_offset_are_reported(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("A +", line=4, offset=10)
        assert info.value.line == 4
        assert info.value.column == 14
