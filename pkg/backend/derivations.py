"""
Derivations represented by commutators, plus the connection and curvature
tables built from them.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterator, Tuple

from algebra import Element, Generator, commutator
from scalars import ZERO, Scalar
from worlds import World, normalize

BRACKET_RIGHT = "bracket-right"  # F -> [F, J]
BRACKET_LEFT = "bracket-left"  # F -> [J, F]


@dataclass(frozen=True)
class Derivation:
    kind: str
    rep: Element
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in (BRACKET_RIGHT, BRACKET_LEFT):
            raise ValueError(f"unknown derivation kind '{self.kind}'")

    def raw(self, f: Element) -> Element:
        if self.kind == BRACKET_RIGHT:
            return commutator(f, self.rep)
        return commutator(self.rep, f)

    def __str__(self) -> str:
        return self.label or f"{self.kind}({self.rep})"


def apply(dv: Derivation, f: Element, world: World) -> Element:
    """Normalized image of f under the derivation"""
    return normalize(dv.raw(f), world)


def curvature(a: Derivation, b: Derivation, f: Element, world: World) -> Element:
    """[a, b] applied to f, i.e. a(b(f)) - b(a(f))"""
    return normalize(
        apply(a, apply(b, f, world), world) - apply(b, apply(a, f, world), world), world
    )


# World-aware builders


def hamiltonian(world: World) -> Element:
    """The H macro when the world defines one, else the H generator"""
    if world.has_macro("H"):
        return world.macro("H")
    return world.gen("H")


def partial(world: World, i: int) -> Derivation:
    """d/dX_i F = [F, P_i]"""
    return Derivation(BRACKET_RIGHT, world.gen("P", i), f"d/dX[{i}]")


def dual_partial(world: World, i: int) -> Derivation:
    """d/dP_i F = [X_i, F]"""
    return Derivation(BRACKET_LEFT, world.gen("X", i), f"d/dP[{i}]")


def time_derivative(h: Element, quantum: bool = False) -> Derivation:
    """
    dF/dt = [F, H]; with ``quantum`` the time derivative obeys
    i*hbar*dF/dt = [F, H], so the representative is -(i/hbar)*H.
    """
    if not quantum:
        return Derivation(BRACKET_RIGHT, h, "D")
    factor = -Scalar.imaginary() * Scalar.param("hbar", -1)
    return Derivation(BRACKET_RIGHT, h * factor, "D_q")


def velocity(world: World, i: int) -> Element:
    """Xdot_i: the world's macro when present, else [X_i, H]"""
    if world.has_macro("Xdot", (i,)):
        return world.macro("Xdot", i)
    return normalize(commutator(world.gen("X", i), hamiltonian(world)), world)


def covariant(world: World, i: int) -> Derivation:
    """nabla_i F = [F, Xdot_i]"""
    return Derivation(BRACKET_RIGHT, velocity(world, i), f"nabla[{i}]")


def metric(world: World, a: int, b: int) -> Element:
    """g_ab = [X_a, Xdot_b]"""
    return normalize(commutator(world.gen("X", a), velocity(world, b)), world)


# Formal differentiation


def formal_partial(element: Element, letter: Generator) -> Element:
    """
    Product-rule derivative of each ordered word with respect to one
    letter, treating the word as a coordinate-ordered monomial.
    """
    result: Dict[Tuple[Generator, ...], Scalar] = {}
    for word, coef in element.items():
        for position, current in enumerate(word):
            if current is letter:
                reduced = word[:position] + word[position + 1 :]
                result[reduced] = result.get(reduced, ZERO) + coef
    return Element(result)


# Tables


@dataclass
class ConnectionTable:
    """Gamma_kij = (1/2)(nabla_i g_jk + nabla_j g_ik - nabla_k g_ij)"""

    dim: int
    entries: Dict[Tuple[int, int, int], Element] = field(default_factory=dict)

    def __getitem__(self, key: Tuple[int, int, int]) -> Element:
        return self.entries[key]

    def triples(self) -> Iterator[Tuple[int, int, int]]:
        return iter(sorted(self.entries))


@dataclass
class CurvatureTable:
    """R_ij = [Xdot_i, Xdot_j]"""

    dim: int
    entries: Dict[Tuple[int, int], Element] = field(default_factory=dict)

    def __getitem__(self, key: Tuple[int, int]) -> Element:
        return self.entries[key]

    def antisymmetry_residuals(self, world: World) -> Dict[Tuple[int, int], Element]:
        return {
            (i, j): normalize(self.entries[(i, j)] + self.entries[(j, i)], world)
            for (i, j) in sorted(self.entries)
            if i <= j and (j, i) in self.entries
        }


def connection_table(dim: int, world: World) -> ConnectionTable:
    metrics = {
        (a, b): metric(world, a, b)
        for a in range(1, dim + 1)
        for b in range(1, dim + 1)
    }
    table = ConnectionTable(dim)
    for k in range(1, dim + 1):
        for i in range(1, dim + 1):
            for j in range(1, dim + 1):
                total = (
                    apply(covariant(world, i), metrics[(j, k)], world)
                    + apply(covariant(world, j), metrics[(i, k)], world)
                    - apply(covariant(world, k), metrics[(i, j)], world)
                )
                table.entries[(k, i, j)] = total * Scalar.rational(1, 2)
    return table


def curvature_table(dim: int, world: World) -> CurvatureTable:
    velocities = {i: velocity(world, i) for i in range(1, dim + 1)}
    table = CurvatureTable(dim)
    for i in range(1, dim + 1):
        for j in range(1, dim + 1):
            table.entries[(i, j)] = normalize(
                commutator(velocities[i], velocities[j]), world
            )
    return table

