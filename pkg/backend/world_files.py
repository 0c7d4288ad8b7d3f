"""
Line-oriented world files.

    # comment
    world flat
    dim 2
    param tau
    sym g 1 2
    gen X[i]
    gen J
    gen Y[0..3]
    order X < P
    rel [X[i],P[j]] = delta(i,j)
    rule Y[n]*J -> J*Y[n+1]
    bound Y[3]*J
    def Xdot[i] = P[i] - A[i]
    open free

Schematic index variables range over every index value used by the
declared generators (1..d when nothing is declared yet). Instances that
mention undeclared generators are skipped; a directive with no valid
instance at all is an error. A rule instance whose right-hand side needs an
undeclared generator marks its left-hand pair as bound, the same as an
explicit bound directive.
"""

import itertools
import logging
import re
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from algebra import Element, Generator
from errors import ExprSyntaxError, UnknownGenerator, WorldSyntaxError
from evaluator import Scope, evaluate
from expr_parser import Bracket, Expr, Mul, Name, parse_expr, schematic_variables
from worlds import (
    CLOSED,
    OPEN_COMMUTATIVE,
    OPEN_FREE,
    World,
    WorldBuilder,
    render,
)

logger = logging.getLogger(__name__)

_DIRECTIVE = re.compile(r"^\s*(?P<keyword>[a-z]+)(?:\s+(?P<rest>.*?))?\s*$")
_GEN = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*)(?:\[(?P<ranges>[^\]]*)\])?$")
_RANGE = re.compile(
    r"^(?:(?P<low>\d+)\.\.(?P<high>\d+)|(?P<value>\d+)|(?P<var>[a-z]\w*))$"
)
_KEYWORDS = (
    "world",
    "dim",
    "param",
    "sym",
    "gen",
    "order",
    "rel",
    "rule",
    "def",
    "bound",
    "open",
)


class _WorldFileParser:
    def __init__(self, text: str):
        self.text = text
        self.name = "world"
        self.dim: Optional[int] = None
        self.kind = CLOSED
        self.builder: Optional[WorldBuilder] = None
        self.pending_params: List[str] = []
        self.pending_symmetric: Dict[str, Tuple[int, ...]] = {}
        self.line = 0
        self.column = 1

    # Errors

    def fail(
        self, message: str, column: Optional[int] = None, expected=()
    ) -> WorldSyntaxError:
        return WorldSyntaxError(
            message, self.line, column or self.column, expected, self.text
        )

    def expression(self, source: str, column: int) -> Expr:
        try:
            return parse_expr(source, self.line, self.text, column - 1)
        except ExprSyntaxError as error:
            raise WorldSyntaxError(
                error.message, error.line, error.column, error.expected, self.text
            ) from None

    # Driver

    def parse(self) -> World:
        for self.line, raw in enumerate(self.text.splitlines(), start=1):
            content = raw.split("#", 1)[0]
            if not content.strip():
                continue
            match = _DIRECTIVE.match(content)
            if not match or match.group("keyword") not in _KEYWORDS:
                self.column = len(content) - len(content.lstrip()) + 1
                raise self.fail("unknown directive", expected=_KEYWORDS)
            keyword = match.group("keyword")
            rest = match.group("rest") or ""
            self.column = (match.start("rest") + 1) if match.group("rest") else 1
            getattr(self, f"directive_{keyword}")(rest)
        if self.builder is None and self.kind != CLOSED:
            self.ensure_builder()
        if self.builder is None:
            self.line = max(self.line, 1)
            raise self.fail("world file declares no generators", expected=("gen",))
        return self.builder.build()

    def ensure_builder(self) -> WorldBuilder:
        if self.builder is None:
            self.builder = WorldBuilder(self.name, self.dim or 1, self.kind)
            self.builder.symmetric.update(self.pending_symmetric)
            for param in self.pending_params:
                self.builder.param(param)
        return self.builder

    # Directives

    def directive_world(self, rest: str) -> None:
        if not re.fullmatch(r"[A-Za-z][\w-]*", rest):
            raise self.fail("bad world name", expected=("name",))
        self.name = rest
        if self.builder is not None:
            self.builder.name = rest

    def directive_dim(self, rest: str) -> None:
        if not rest.isdigit() or int(rest) < 1:
            raise self.fail(
                "dimension must be a positive integer", expected=("integer",)
            )
        if self.builder is not None:
            raise self.fail("dim must come before the first gen")
        self.dim = int(rest)

    def directive_param(self, rest: str) -> None:
        for symbol in rest.split():
            if not re.fullmatch(r"[A-Za-z]\w*", symbol):
                raise self.fail(f"bad parameter name '{symbol}'", expected=("name",))
            if self.builder is None:
                self.pending_params.append(symbol)
            else:
                self.builder.param(symbol)

    def directive_open(self, rest: str) -> None:
        kinds = {"": OPEN_FREE, "free": OPEN_FREE, "commutative": OPEN_COMMUTATIVE}
        if rest not in kinds:
            raise self.fail("bad open kind", expected=("free", "commutative"))
        self.kind = kinds[rest]
        if self.builder is not None:
            self.builder.kind = self.kind

    def directive_sym(self, rest: str) -> None:
        parts = rest.split()
        if len(parts) < 3 or not all(p.isdigit() and int(p) >= 1 for p in parts[1:]):
            raise self.fail("expected 'sym <Name> <pos> <pos> ...'", expected=("name",))
        positions = tuple(sorted(int(p) - 1 for p in parts[1:]))
        if self.builder is not None:
            raise self.fail("sym must come before the first gen")
        self.pending_symmetric[parts[0]] = positions

    def directive_gen(self, rest: str) -> None:
        builder = self.ensure_builder()
        for item in re.split(r"\s+(?![^\[]*\])", rest.strip()):
            match = _GEN.match(item)
            if not match:
                raise self.fail(
                    f"bad generator declaration '{item}'", expected=("name",)
                )
            ranges = match.group("ranges")
            axes: List[Sequence[int]] = []
            if ranges:
                for part in ranges.split(","):
                    axes.append(self.index_range(part.strip()))
            for indices in itertools.product(*axes):
                builder.declare(match.group("name"), *indices)

    def index_range(self, part: str) -> Sequence[int]:
        match = _RANGE.match(part)
        if not match:
            raise self.fail(
                f"bad index range '{part}'", expected=("integer", "n..m", "name")
            )
        if match.group("var"):
            return range(1, (self.dim or 1) + 1)
        if match.group("value"):
            return [int(match.group("value"))]
        low, high = int(match.group("low")), int(match.group("high"))
        if low > high:
            raise self.fail(f"empty index range '{part}'")
        return range(low, high + 1)

    def directive_order(self, rest: str) -> None:
        builder = self.ensure_builder()
        order: List[Generator] = []
        for item in (piece.strip() for piece in rest.split("<")):
            if not item:
                raise self.fail("empty entry in order", expected=("name",))
            expr = self.expression(item, self.column + rest.find(item))
            if not isinstance(expr, Name):
                raise self.fail(f"bad order entry '{item}'", expected=("name",))
            if expr.indices:
                try:
                    found = [self.generator(expr, {})]
                except UnknownGenerator:
                    raise self.fail(f"undeclared generator {item}") from None
            else:
                found = [g for g in builder.generators if g.name == expr.name]
                if not found:
                    raise self.fail(f"undeclared generator family '{expr.name}'")
            for generator in found:
                if generator in order:
                    raise self.fail(f"generator {generator} listed twice in order")
                order.append(generator)
        missing = [g for g in builder.generators if g not in order]
        if missing:
            raise self.fail(
                "order does not mention " + ", ".join(str(g) for g in missing)
            )
        builder.order = order

    def directive_rel(self, rest: str) -> None:
        lhs_text, rhs_text, rhs_column = self.split(rest, "=")
        lhs = self.expression(lhs_text, self.column)
        rhs = self.expression(rhs_text, rhs_column)
        if not (
            isinstance(lhs, Bracket)
            and isinstance(lhs.left, Name)
            and isinstance(lhs.right, Name)
        ):
            raise self.fail(
                "rel needs a bracket of two generators", expected=("[a,b]",)
            )
        pair = (lhs.left, lhs.right)
        for env, (a, b), value in self.instances(lhs, pair, rhs):
            self.ensure_builder().relate(a, b, value)

    def directive_rule(self, rest: str) -> None:
        lhs_text, rhs_text, rhs_column = self.split(rest, "->")
        lhs = self.expression(lhs_text, self.column)
        rhs = self.expression(rhs_text, rhs_column)
        if not (
            isinstance(lhs, Mul)
            and isinstance(lhs.left, Name)
            and isinstance(lhs.right, Name)
        ):
            raise self.fail("rule needs a product of two generators on the left")
        pair = (lhs.left, lhs.right)
        builder = self.ensure_builder()
        for env, word, value in self.instances(
            lhs, pair, rhs, on_missing=lambda word: builder.bound(*word)
        ):
            builder.rule(word, value)

    def directive_bound(self, rest: str) -> None:
        lhs = self.expression(rest, self.column)
        if not (
            isinstance(lhs, Mul)
            and isinstance(lhs.left, Name)
            and isinstance(lhs.right, Name)
        ):
            raise self.fail("bound needs a product of two generators")
        builder = self.ensure_builder()
        for env, word, _ in self.instances(lhs, (lhs.left, lhs.right), lhs):
            builder.bound(*word)

    def directive_def(self, rest: str) -> None:
        lhs_text, rhs_text, rhs_column = self.split(rest, "=")
        lhs = self.expression(lhs_text, self.column)
        rhs = self.expression(rhs_text, rhs_column)
        if not isinstance(lhs, Name) or lhs.partials:
            raise self.fail("def needs a name on the left", expected=("name",))
        for env, _, value in self.instances(lhs, (), rhs):
            indices = tuple(self.scope(env).index(i) for i in lhs.indices)
            self.ensure_builder().define(lhs.name, indices, value)

    # Helpers

    def split(self, rest: str, separator: str) -> Tuple[str, str, int]:
        # the first separator outside brackets
        depth = 0
        for position in range(len(rest)):
            char = rest[position]
            if char in "[(":
                depth += 1
            elif char in "])":
                depth -= 1
            elif depth == 0 and rest.startswith(separator, position):
                left = rest[:position].strip()
                right = rest[position + len(separator) :]
                column = self.column + position + len(separator)
                column += len(right) - len(right.lstrip())
                if not left or not right.strip():
                    break
                return left, right.strip(), column
        raise self.fail(f"expected '<lhs> {separator} <rhs>'", expected=(separator,))

    def index_values(self) -> List[int]:
        builder = self.ensure_builder()
        values = sorted({i for g in builder.generators for i in g.indices})
        return values or list(range(1, (self.dim or 1) + 1))

    def instances(
        self,
        lhs: Expr,
        letters: Sequence[Name],
        rhs: Expr,
        on_missing: Optional[Callable[[Tuple[Generator, ...]], None]] = None,
    ) -> Iterator[Tuple[Dict[str, int], Tuple[Generator, ...], Element]]:
        """
        (index environment, left-hand generators, right-hand value) per instance.
        With ``on_missing``, an instance whose left-hand letters exist but whose
        right-hand side does not is handed to it instead of being skipped.
        """
        variables: List[str] = []
        for expr in (lhs, rhs):
            for var in schematic_variables(expr):
                if var not in variables:
                    variables.append(var)
        values = self.index_values()
        produced = 0
        first_missing: Optional[UnknownGenerator] = None
        for combination in itertools.product(values, repeat=len(variables)):
            env = dict(zip(variables, combination))
            try:
                found = tuple(self.generator(name, env) for name in letters)
            except UnknownGenerator as missing:
                first_missing = first_missing or missing
                continue
            try:
                value = evaluate(rhs, self.scope(env))
            except UnknownGenerator as missing:
                first_missing = first_missing or missing
                if on_missing is not None and env:
                    on_missing(found)
                    produced += 1
                continue
            produced += 1
            yield env, found, value
        if not produced:
            name = first_missing.generator if first_missing else "?"
            raise self.fail(f"undeclared generator {name}")

    def scope(self, env: Dict[str, int]) -> Scope:
        builder = self.ensure_builder()
        provisional = World(
            builder.name,
            builder.dim,
            builder.generators,
            params=builder.params,
            macros=builder.macros,
            symmetric=builder.symmetric,
            kind=builder.kind,
        )
        return Scope(provisional, indices=env)

    def generator(self, name: Name, env: Dict[str, int]) -> Generator:
        scope = self.scope(env)
        indices = tuple(scope.index(i) for i in name.indices)
        return scope.generator(name.name, indices, name.partials)


def parse_world_file(text: str) -> World:
    """Parse and validate a world file; errors carry line and column"""
    world = _WorldFileParser(text).parse()
    logger.info("parsed world file for %r", world)
    return world


def load_world_file(file_path: str) -> World:
    """Read a world file from disk; the file must be valid UTF-8"""
    with open(file_path, "rb") as file:
        data = file.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as error:
        head = data[: error.start].decode("utf-8")
        line = head.count("\n") + 1
        column = len(head) - (head.rfind("\n") + 1) + 1
        raise WorldSyntaxError("file is not valid UTF-8", line, column) from None
    return parse_world_file(text)


def render_world(world: World) -> str:
    """World file text that parses back to an equal world"""
    lines = [f"world {world.name}", f"dim {world.dim}"]
    if world.kind == OPEN_FREE:
        lines.append("open free")
    elif world.kind == OPEN_COMMUTATIVE:
        lines.append("open commutative")
    lines.extend(f"param {p}" for p in world.params)
    for name, positions in world.symmetric.items():
        lines.append(f"sym {name} " + " ".join(str(p + 1) for p in positions))
    lines.extend(f"gen {g}" for g in world.generators)
    if len(world.generators) > 1:
        lines.append("order " + " < ".join(str(g) for g in world.generators))
    for rule in sorted(world.rules.values(), key=lambda r: world.word_key(r.lhs)):
        lines.append(f"rule {rule.render(world)}")
    for a, b in sorted(world.bounds, key=world.word_key):
        lines.append(f"bound {a}*{b}")
    for name, table in world.macros.items():
        for indices, value in sorted(table.items()):
            label = name + (f"[{','.join(map(str, indices))}]" if indices else "")
            lines.append(f"def {label} = {render(value, world)}")
    return "\n".join(lines) + "\n"
