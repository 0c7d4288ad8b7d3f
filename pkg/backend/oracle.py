"""
Numeric second opinion for identities of the free algebra: substitute
seeded random dense matrices for the generators and measure the residual.

Identities are evaluated from their expression tree, bracket by bracket,
so the numbers never pass through the symbolic term collection they are
checking. Worlds with relations are refused: [X,P] = 1 has no
finite-dimensional matrix solution.
"""

import logging
from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, List, Optional, Sequence, Set, Union

import numpy as np

from algebra import Element, Generator
from config import config
from errors import (
    DimOutOfRange,
    EvaluationError,
    OracleRefused,
    UnassignedGenerator,
)
from evaluator import Scope, evaluate as evaluate_symbolic
from expr_parser import (
    Add,
    Bracket,
    Div,
    Expr,
    Imaginary,
    Index,
    Mul,
    Name,
    Neg,
    Number,
    Pow,
    Sub,
    parse_expr,
)
from models import CheckResult, SuiteReport
from worlds import World, free_world, normalize, open_free_world

logger = logging.getLogger(__name__)

CONTROL_THRESHOLD = 1e-2  # Relative residual a non-identity must exceed
ENTRY_BOUND = 1.0

Identity = Union[Element, Expr]


@dataclass
class MatrixAssignment:
    """Generator -> n x n matrix, plus real values for scalar parameters"""

    n: int
    seed: int
    matrices: Dict[Generator, np.ndarray] = field(default_factory=dict)
    params: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def random(
        cls,
        generators: Iterable[Generator],
        n: int,
        seed: int,
        params: Sequence[str] = (),
    ) -> "MatrixAssignment":
        """Entries uniform in [-1, 1]; parameters uniform in [1/2, 3/2]"""
        rng = np.random.default_rng(seed)
        assignment = cls(n=n, seed=seed)
        for generator in sorted(set(generators), key=lambda g: g.sort_key):
            assignment.matrices[generator] = rng.uniform(
                -ENTRY_BOUND, ENTRY_BOUND, size=(n, n)
            )
        for name in sorted(set(params)):
            assignment.params[name] = float(rng.uniform(0.5, 1.5))
        return assignment

    def matrix(self, generator: Generator) -> np.ndarray:
        found = self.matrices.get(generator)
        if found is None:
            raise UnassignedGenerator(str(generator))
        return found


def _real_if_possible(matrix: np.ndarray) -> np.ndarray:
    if np.iscomplexobj(matrix) and not np.any(matrix.imag):
        return matrix.real
    return matrix


def evaluate(e: Element, m: MatrixAssignment) -> np.ndarray:
    """The matrix obtained by substituting every generator and parameter"""
    total = np.zeros((m.n, m.n), dtype=complex)
    for word, coef in e.items():
        product = np.eye(m.n)
        for letter in word:
            product = product @ m.matrix(letter)
        total = total + coef.to_complex(m.params) * product
    return _real_if_possible(total)


def _generator(name: Name) -> Generator:
    if any(index.var is not None for index in name.indices):
        raise EvaluationError(f"'{name.name}' has a schematic index")
    return Generator(name.name, [i.offset for i in name.indices], name.partials)


def evaluate_expr(expr: Expr, m: MatrixAssignment) -> np.ndarray:
    """Matrix value of an expression tree; brackets become A@B - B@A"""
    if isinstance(expr, Number):
        return expr.value * np.eye(m.n)
    if isinstance(expr, Imaginary):
        return 1j * np.eye(m.n)
    if isinstance(expr, Name):
        return m.matrix(_generator(expr))
    if isinstance(expr, Add):
        return evaluate_expr(expr.left, m) + evaluate_expr(expr.right, m)
    if isinstance(expr, Sub):
        return evaluate_expr(expr.left, m) - evaluate_expr(expr.right, m)
    if isinstance(expr, Mul):
        return evaluate_expr(expr.left, m) @ evaluate_expr(expr.right, m)
    if isinstance(expr, Neg):
        return -evaluate_expr(expr.operand, m)
    if isinstance(expr, Bracket):
        left = evaluate_expr(expr.left, m)
        right = evaluate_expr(expr.right, m)
        return left @ right - right @ left
    if isinstance(expr, Pow) and expr.exponent >= 0:
        return np.linalg.matrix_power(evaluate_expr(expr.base, m), expr.exponent)
    if isinstance(expr, Div) and isinstance(expr.right, Number) and expr.right.value:
        return evaluate_expr(expr.left, m) / expr.right.value
    raise EvaluationError(
        f"the matrix oracle cannot evaluate {type(expr).__name__} nodes"
    )


def expr_generators(expr: Expr) -> Set[Generator]:
    found: Set[Generator] = set()

    def walk(node: object) -> None:
        if isinstance(node, Name):
            found.add(_generator(node))
            return
        if isinstance(node, Index) or not hasattr(node, "__dataclass_fields__"):
            return
        for item in fields(node):  # type: ignore[arg-type]
            walk(getattr(node, item.name))

    walk(expr)
    return found


def _norm_scale(identity: Identity, m: MatrixAssignment) -> float:
    """Size of the operands the residual is compared against, at least 1"""
    if isinstance(identity, Element):
        scale = 0.0
        for word, coef in identity.items():
            term = abs(coef.to_complex(m.params))
            for letter in word:
                term *= float(np.linalg.norm(m.matrix(letter)))
            scale += term
        return max(scale, 1.0)
    norms = [float(np.linalg.norm(matrix)) for matrix in m.matrices.values()]
    largest = max(norms, default=1.0)
    return max(largest ** _depth(identity), 1.0)


def _depth(expr: object) -> int:
    """Number of factors in the longest product a tree can produce"""
    if isinstance(expr, Name):
        return 1
    if isinstance(expr, (Mul, Bracket)):
        return _depth(expr.left) + _depth(expr.right)
    if isinstance(expr, (Add, Sub)):
        return max(_depth(expr.left), _depth(expr.right))
    if isinstance(expr, Neg):
        return _depth(expr.operand)
    if isinstance(expr, Pow):
        return _depth(expr.base) * max(expr.exponent, 0)
    if isinstance(expr, Div):
        return _depth(expr.left)
    return 0


def relative_residual(identity: Identity, m: MatrixAssignment) -> float:
    if isinstance(identity, Element):
        value = evaluate(identity, m)
    else:
        value = evaluate_expr(identity, m)
    return float(np.linalg.norm(value)) / _norm_scale(identity, m)


def oracle_check(
    identity: Identity,
    world: World,
    trials: Optional[int] = None,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    name: str = "oracle",
    expect_zero: bool = True,
) -> SuiteReport:
    """
    Evaluate the identity under ``trials`` random assignments with seeds
    seed, seed+1, ... Passes iff every relative residual stays below the
    configured tolerance, or for controls, iff the largest exceeds
    CONTROL_THRESHOLD.
    """
    if world.rules:
        raise OracleRefused(world.name)
    trials = config.ORACLE_TRIALS if trials is None else trials
    n = config.ORACLE_DIM if n is None else n
    seed = config.SEED if seed is None else seed
    if not 1 <= n <= config.MAX_DIM:
        raise DimOutOfRange(n, 1, config.MAX_DIM)
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    if isinstance(identity, Element):
        generators = identity.generators()
        params = sorted(identity.parameters())
    else:
        generators, params = expr_generators(identity), []
    residuals: List[float] = []
    for trial_seed in range(seed, seed + trials):
        assignment = MatrixAssignment.random(generators, n, trial_seed, params)
        residuals.append(relative_residual(identity, assignment))
        logger.debug("oracle %s seed %d: %.3e", name, trial_seed, residuals[-1])
    worst = max(residuals)
    if expect_zero:
        passed = worst < config.ORACLE_TOLERANCE
        note = f"max relative residual over {trials} trials, n={n}"
    else:
        passed = worst > CONTROL_THRESHOLD
        note = f"control: expected above {CONTROL_THRESHOLD:g}"
    report = SuiteReport(
        suite=f"oracle-{name}",
        parameters={"trials": trials, "n": n, "seed": seed, "world": world.name},
    )
    report.results.append(
        CheckResult(identity=name, residual=f"{worst:.3e}", passed=passed, note=note)
    )
    logger.info("oracle %s: worst relative residual %.3e", name, worst)
    return report


# Identity catalog


def _cyclic(a: str, b: str, c: str) -> str:
    return f"[[{a},{b}],{c}] + [[{b},{c}],{a}] + [[{c},{a}],{b}]"


def _levi_civita_text(i: int, j: int, k: int) -> str:
    """[X_i,[X_j,Xddot_k]] - D[X_i,g_jk] - 2 Gamma_kij over free X, H"""

    def xdot(a: int) -> str:
        return f"[X[{a}],H]"

    def g(a: int, b: int) -> str:
        return f"[X[{a}],{xdot(b)}]"

    left = f"[X[{i}],[X[{j}],[{xdot(k)},H]]]"
    correction = f"[[X[{i}],{g(j, k)}],H]"
    connection = (
        f"[{g(j, k)},{xdot(i)}] + [{g(i, k)},{xdot(j)}] - [{g(i, j)},{xdot(k)}]"
    )
    return f"{left} - {correction} - ({connection})"


IDENTITIES: Dict[str, str] = {
    "jacobi": _cyclic("A", "B", "C"),
    "bianchi": _cyclic("Xdot[1]", "Xdot[2]", "Xdot[3]"),
    "curvature-operator": (
        "[[F,Lambda[2]],Lambda[1]] - [[F,Lambda[1]],Lambda[2]]"
        " - [[Lambda[1],Lambda[2]],F]"
    ),
    "levi-civita-free": _levi_civita_text(1, 2, 1),
    "derivation-of-bracket": "[[A,B],L] - [[A,L],B] - [A,[B,L]]",
    "broken-control": "[[A,B],C]",
}
CONTROLS = frozenset({"broken-control"})


def inferred_world(expr: Expr) -> World:
    """Free world on the letters an expression mentions"""
    letters = sorted(expr_generators(expr), key=lambda g: g.sort_key)
    if not letters:
        return open_free_world("oracle")
    return free_world(letters)


def symbolic_result(expr: Expr, world: World, expect_zero: bool) -> CheckResult:
    """The engine's own normal form of the identity, for comparison"""
    element = normalize(evaluate_symbolic(expr, Scope(world)), world)
    return CheckResult.of(
        "symbolic", element, world, note="normal form", expect_zero=expect_zero
    )


def run_identity(
    identity: str,
    trials: Optional[int] = None,
    n: Optional[int] = None,
    seed: Optional[int] = None,
) -> SuiteReport:
    """A catalog name, or any expression, checked numerically and symbolically"""
    name = identity if identity in IDENTITIES else "expression"
    text = IDENTITIES.get(identity, identity)
    expect_zero = identity not in CONTROLS
    expr = parse_expr(text)
    world = inferred_world(expr)
    report = oracle_check(expr, world, trials, n, seed, name, expect_zero)
    report.lines.append(f"identity: {text}")
    report.results.append(symbolic_result(expr, world, expect_zero))
    return report
