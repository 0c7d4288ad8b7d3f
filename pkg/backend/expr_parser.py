"""
Expression language for elements.

    sum      := product (("+" | "-") product)*
    product  := unary (("*" | "/") unary)*
    unary    := "-" unary | "D" unary | "d/d" name unary | power
    power    := atom ("^" ["-"] INT)?
    atom     := INT | "i" | name | "[" sum "," sum "]" | "(" sum ")"
              | "delta" "(" index "," index ")"
    name     := NAME ["[" index ("," index)* "]"] ["_{" NAME ("," NAME)* "}"]
    index    := INT | NAME [("+" | "-") INT]

Precedence runs brackets > power > unary minus > "*" > "+"/"-". Printing
is canonical: explicit "*", no spaces inside brackets, parentheses only
where precedence needs them, so print(parse(print(e))) == print(e).
"""

import re
from dataclasses import dataclass, fields
from typing import Iterator, List, NamedTuple, Optional, Tuple, Union, get_args

from errors import ExprSyntaxError

RESERVED = {"i", "D", "delta"}


class Token(NamedTuple):
    type: str
    value: str
    column: int


_TOKENS = [
    ("dd", r"d/d(?=[A-Za-z])"),
    ("int", r"\d+"),
    ("name", r"[A-Za-z](?:[A-Za-z0-9]|_(?!\{))*"),
    ("partials", r"_\{"),
    ("lbrack", r"\["),
    ("rbrack", r"\]"),
    ("lpar", r"\("),
    ("rpar", r"\)"),
    ("lbrace", r"\{"),
    ("rbrace", r"\}"),
    ("plus", r"\+"),
    ("minus", r"-"),
    ("mul", r"\*"),
    ("div", r"/"),
    ("pow", r"\^"),
    ("comma", r","),
    ("skip", r"[ \t]+"),
    ("error", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in _TOKENS))

_DESCRIBE = {
    "int": "integer",
    "name": "name",
    "rbrack": "']'",
    "rpar": "')'",
    "rbrace": "'}'",
    "comma": "','",
    "end": "end of input",
}


# Abstract syntax


@dataclass(frozen=True)
class Number:
    value: int


@dataclass(frozen=True)
class Imaginary:
    pass


@dataclass(frozen=True)
class Index:
    """A concrete index (var is None) or a schematic var plus offset"""

    var: Optional[str]
    offset: int = 0

    def __str__(self) -> str:
        if self.var is None:
            return str(self.offset)
        if self.offset > 0:
            return f"{self.var}+{self.offset}"
        if self.offset < 0:
            return f"{self.var}-{-self.offset}"
        return self.var


@dataclass(frozen=True)
class Name:
    """Generator, parameter, macro or binding reference"""

    name: str
    indices: Tuple[Index, ...] = ()
    partials: Tuple[str, ...] = ()


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Bracket:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Partial:
    """d/dX[i] e is [e, P[i]]; d/dP[i] e is [X[i], e]"""

    variable: Name
    operand: "Expr"


@dataclass(frozen=True)
class TimeDerivative:
    operand: "Expr"


@dataclass(frozen=True)
class Delta:
    left: Index
    right: Index


Expr = Union[
    Number,
    Imaginary,
    Name,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Bracket,
    Partial,
    TimeDerivative,
    Delta,
]
_NODES = get_args(Expr)


# Parsing


def tokenize(text: str, line: int = 1, source: str = "") -> Iterator[Token]:
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup or "error"
        if kind == "skip":
            continue
        if kind == "error":
            raise ExprSyntaxError(
                f"unexpected character '{match.group()}'",
                line,
                match.start() + 1,
                source=source or text,
            )
        yield Token(kind, match.group(), match.start() + 1)
    yield Token("end", "", len(text) + 1)


class Parser:
    """Recursive-descent parser over one line of text"""

    def __init__(self, text: str, line: int = 1, source: str = "", offset: int = 0):
        self.text = text
        self.line = line
        self.source = source or text
        self.offset = offset
        self.tokens: List[Token] = list(tokenize(text, line, self.source))
        self.position = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.token
        if token.type != "end":
            self.position += 1
        return token

    def error(self, message: str, expected: Tuple[str, ...] = ()) -> ExprSyntaxError:
        return ExprSyntaxError(
            message,
            self.line,
            self.token.column + self.offset,
            [_DESCRIBE.get(kind, kind) for kind in expected],
            self.source,
        )

    def expect(self, kind: str) -> Token:
        if self.token.type != kind:
            found = self.token.value or "end of input"
            raise self.error(f"unexpected '{found}'", (kind,))
        return self.advance()

    def parse(self) -> Expr:
        if self.token.type == "end":
            raise self.error("empty expression", ("int", "name"))
        expr = self.sum()
        if self.token.type != "end":
            raise self.error(
                f"unexpected '{self.token.value}'", ("plus", "minus", "mul", "end")
            )
        return expr

    def sum(self) -> Expr:
        left = self.product()
        while self.token.type in ("plus", "minus"):
            operator = self.advance().type
            right = self.product()
            left = Add(left, right) if operator == "plus" else Sub(left, right)
        return left

    def product(self) -> Expr:
        left = self.unary()
        while self.token.type in ("mul", "div"):
            operator = self.advance().type
            right = self.unary()
            left = Mul(left, right) if operator == "mul" else Div(left, right)
        return left

    def unary(self) -> Expr:
        token = self.token
        if token.type == "minus":
            self.advance()
            return Neg(self.unary())
        if token.type == "name" and token.value == "D":
            self.advance()
            return TimeDerivative(self.unary())
        if token.type == "dd":
            self.advance()
            if self.token.type != "name" or self.token.value in RESERVED:
                raise self.error("d/d needs a generator", ("name",))
            variable = self.name()
            return Partial(variable, self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.token.type != "pow":
            return base
        self.advance()
        sign = 1
        if self.token.type == "minus":
            self.advance()
            sign = -1
        exponent = self.expect("int")
        return Pow(base, sign * int(exponent.value))

    def atom(self) -> Expr:
        token = self.token
        if token.type == "int":
            self.advance()
            return Number(int(token.value))
        if token.type == "name":
            if token.value == "i":
                self.advance()
                return Imaginary()
            if token.value == "delta":
                return self.delta()
            return self.name()
        if token.type == "lbrack":
            self.advance()
            left = self.sum()
            self.expect("comma")
            right = self.sum()
            self.expect("rbrack")
            return Bracket(left, right)
        if token.type == "lpar":
            self.advance()
            inner = self.sum()
            self.expect("rpar")
            return inner
        found = token.value or "end of input"
        raise self.error(f"unexpected '{found}'", ("int", "name", "lbrack", "lpar"))

    def name(self) -> Name:
        head = self.expect("name").value
        indices: List[Index] = []
        partials: List[str] = []
        if self.token.type == "lbrack":
            self.advance()
            indices.append(self.index())
            while self.token.type == "comma":
                self.advance()
                indices.append(self.index())
            self.expect("rbrack")
        if self.token.type == "partials":
            self.advance()
            partials.append(self.partial_label())
            while self.token.type == "comma":
                self.advance()
                partials.append(self.partial_label())
            self.expect("rbrace")
        return Name(head, tuple(indices), tuple(sorted(partials)))

    def partial_label(self) -> str:
        if self.token.type in ("name", "int"):
            return self.advance().value
        raise self.error("bad partial label", ("name", "int"))

    def index(self) -> Index:
        if self.token.type == "int":
            return Index(None, int(self.advance().value))
        if self.token.type == "name":
            var = self.advance().value
            offset = 0
            if self.token.type in ("plus", "minus"):
                sign = 1 if self.advance().type == "plus" else -1
                offset = sign * int(self.expect("int").value)
            return Index(var, offset)
        raise self.error("bad index", ("int", "name"))

    def delta(self) -> Delta:
        self.advance()
        self.expect("lpar")
        left = self.index()
        self.expect("comma")
        right = self.index()
        self.expect("rpar")
        return Delta(left, right)


def parse_expr(text: str, line: int = 1, source: str = "", offset: int = 0) -> Expr:
    """Parse one expression; errors carry line, column and the expected set"""
    return Parser(text, line, source, offset).parse()


# Printing

_SUM, _PRODUCT, _UNARY, _POWER, _ATOM = 1, 2, 3, 4, 5


def _level(expr: Expr) -> int:
    if isinstance(expr, (Add, Sub)):
        return _SUM
    if isinstance(expr, (Mul, Div)):
        return _PRODUCT
    if isinstance(expr, (Neg, TimeDerivative, Partial)):
        return _UNARY
    if isinstance(expr, Pow):
        return _POWER
    return _ATOM


def _wrap(expr: Expr, minimum: int) -> str:
    text = print_expr(expr)
    return f"({text})" if _level(expr) < minimum else text


def print_name(name: Name) -> str:
    text = name.name
    if name.indices:
        text += "[" + ",".join(str(i) for i in name.indices) + "]"
    if name.partials:
        text += "_{" + ",".join(name.partials) + "}"
    return text


def print_expr(expr: Expr) -> str:
    """Canonical text for an expression tree"""
    if isinstance(expr, Number):
        return str(expr.value)
    if isinstance(expr, Imaginary):
        return "i"
    if isinstance(expr, Name):
        return print_name(expr)
    if isinstance(expr, Add):
        return f"{_wrap(expr.left, _SUM)} + {_wrap(expr.right, _PRODUCT)}"
    if isinstance(expr, Sub):
        return f"{_wrap(expr.left, _SUM)} - {_wrap(expr.right, _PRODUCT)}"
    if isinstance(expr, Mul):
        return f"{_wrap(expr.left, _PRODUCT)}*{_wrap(expr.right, _UNARY)}"
    if isinstance(expr, Div):
        return f"{_wrap(expr.left, _PRODUCT)}/{_wrap(expr.right, _UNARY)}"
    if isinstance(expr, Neg):
        return f"-{_wrap(expr.operand, _UNARY)}"
    if isinstance(expr, Pow):
        return f"{_wrap(expr.base, _ATOM)}^{expr.exponent}"
    if isinstance(expr, Bracket):
        return f"[{print_expr(expr.left)},{print_expr(expr.right)}]"
    if isinstance(expr, Partial):
        return f"d/d{print_name(expr.variable)} {_wrap(expr.operand, _UNARY)}"
    if isinstance(expr, TimeDerivative):
        return f"D {_wrap(expr.operand, _UNARY)}"
    if isinstance(expr, Delta):
        return f"delta({expr.left},{expr.right})"
    raise TypeError(f"not an expression: {expr!r}")


def schematic_variables(expr: Expr) -> List[str]:
    """Index variables in order of first appearance"""
    found: List[str] = []

    def visit(node: Expr) -> None:
        if isinstance(node, Name):
            indices: Tuple[Index, ...] = node.indices
        elif isinstance(node, Delta):
            indices = (node.left, node.right)
        else:
            indices = ()
        for index in indices:
            if index.var is not None and index.var not in found:
                found.append(index.var)
        for field in fields(node):
            child = getattr(node, field.name)
            if isinstance(child, _NODES):
                visit(child)

    visit(expr)
    return found
