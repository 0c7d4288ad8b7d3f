"""
Maxwell's equations from the exterior derivative of the Weyl line element,
and the Yang-Mills curvature F = dA + A^A checked against the commutator
curvature of a gauge world.

The Maxwell derivation runs on commutative sympy coefficients. Yang-Mills
keeps the potential noncommutative and specializes to sympy coefficients
for the commuting case.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import List, Tuple

from algebra import Element, commutator
from config import config
from derivations import curvature_table
from errors import DimOutOfRange
from forms import (
    SPACETIME,
    Coefficient,
    Coefficients,
    CoordinateSystem,
    DifferentialForm,
    commutative_coefficients,
    exterior_d,
    free_coefficients,
    symbol,
    wedge,
)
from models import CheckResult, SuiteReport
from worlds import World, gauge_world, normalize

logger = logging.getLogger(__name__)

SPACE = ("x", "y", "z")
MAX_GAUGE_DIM = 4

# Expected coefficients of d(lambda), by basis pair
_DISPLAYED = {
    ("x", "y"): (("G", "x", 1), ("F", "y", -1)),
    ("x", "z"): (("H", "x", 1), ("F", "z", -1)),
    ("y", "z"): (("H", "y", 1), ("G", "z", -1)),
    ("x", "t"): (("F", "t", -1), ("phi", "x", -1)),
    ("y", "t"): (("G", "t", -1), ("phi", "y", -1)),
    ("z", "t"): (("H", "t", -1), ("phi", "z", -1)),
}
_CORRECTED = {("x", "z"): "corrected transcription: H_x - F_z, not H_x - F_y"}

Vector = Tuple[Coefficient, Coefficient, Coefficient]


@dataclass(frozen=True)
class ElectromagneticField:
    """E and B as coefficients, components in x, y, z order"""

    electric: Vector
    magnetic: Vector


@dataclass(frozen=True)
class FieldSources:
    """Charge density and current defined from E and B, never solved for"""

    rho: Coefficient
    current: Vector


def _field(ring: Coefficients, name: str) -> Coefficient:
    return ring.field(SPACETIME, name)


def _d(ring: Coefficients, value: Coefficient, label: str) -> Coefficient:
    return ring.partial(value, SPACETIME, SPACETIME.position(label))


def potential_form(ring: Coefficients) -> DifferentialForm:
    """lambda = F dx + G dy + H dz - phi dt"""
    return DifferentialForm.one_form(
        SPACETIME,
        ring,
        {
            "x": _field(ring, "F"),
            "y": _field(ring, "G"),
            "z": _field(ring, "H"),
            "t": -_field(ring, "phi"),
        },
    )


def extract_fields(d_lambda: DifferentialForm) -> ElectromagneticField:
    """
    Read d(lambda) as B1 dy^dz + B2 dz^dx + B3 dx^dy + E1 dx^dt + E2 dy^dt
    + E3 dz^dt.
    """
    electric = tuple(d_lambda.coefficient(c, "t") for c in SPACE)
    magnetic = (
        d_lambda.coefficient("y", "z"),
        d_lambda.coefficient("z", "x"),
        d_lambda.coefficient("x", "y"),
    )
    return ElectromagneticField(electric, magnetic)  # type: ignore[arg-type]


def divergence(vector: Vector, ring: Coefficients) -> Coefficient:
    total = ring.zero()
    for component, label in zip(vector, SPACE):
        total = total + _d(ring, component, label)
    return ring.reduce(total)


def curl(vector: Vector, ring: Coefficients) -> Vector:
    a1, a2, a3 = vector
    return (
        ring.reduce(_d(ring, a3, "y") - _d(ring, a2, "z")),
        ring.reduce(_d(ring, a1, "z") - _d(ring, a3, "x")),
        ring.reduce(_d(ring, a2, "x") - _d(ring, a1, "y")),
    )


def inhomogeneous_maxwell(
    field: ElectromagneticField, ring: Coefficients
) -> FieldSources:
    """rho := div E and J := curl B - dE/dt"""
    rotation = curl(field.magnetic, ring)
    current = tuple(
        ring.reduce(rotation[k] - _d(ring, field.electric[k], "t")) for k in range(3)
    )
    rho = divergence(field.electric, ring)
    return FieldSources(rho, current)  # type: ignore[arg-type]


def weyl_maxwell_derivation() -> SuiteReport:
    """
    d(lambda) yields E and B; d(d(lambda)) = 0 is then the homogeneous
    pair div B = 0 and curl E + dB/dt = 0.
    """
    ring = commutative_coefficients()
    report = SuiteReport(suite="maxwell", parameters={"coordinates": "x,y,z,t"})
    lam = potential_form(ring)
    d_lambda = exterior_d(lam)
    report.lines.append(f"lambda = {lam}")
    report.lines.append(f"d(lambda) = {d_lambda}")

    for (first, second), terms in _DISPLAYED.items():
        expected = ring.zero()
        for name, label, sign in terms:
            expected = expected + _d(ring, _field(ring, name), label) * sign
        report.results.append(
            ring.check(
                f"dlambda-d{first}d{second}",
                d_lambda.coefficient(first, second) - expected,
                note=_CORRECTED.get((first, second)),
            )
        )

    field = extract_fields(d_lambda)
    potential = (_field(ring, "F"), _field(ring, "G"), _field(ring, "H"))
    phi = _field(ring, "phi")
    for k in range(3):
        report.lines.append(f"E{k + 1} = {ring.render(field.electric[k])}")
    for k in range(3):
        report.lines.append(f"B{k + 1} = {ring.render(field.magnetic[k])}")
    for k, label in enumerate(SPACE):
        expected = -_d(ring, phi, label) - _d(ring, potential[k], "t")
        report.results.append(
            ring.check("electric-field", field.electric[k] - expected, (k + 1,))
        )
    for k, rotation in enumerate(curl(potential, ring)):
        report.results.append(
            ring.check("magnetic-field", field.magnetic[k] - rotation, (k + 1,))
        )

    dd_lambda = exterior_d(d_lambda)
    report.lines.append(f"d(d(lambda)) = {dd_lambda}")
    for basis in itertools.combinations(SPACETIME.labels, 3):
        report.results.append(
            ring.check(
                "dd-lambda", dd_lambda.coefficient(*basis), subject="".join(basis)
            )
        )

    gauss = divergence(field.magnetic, ring)
    report.lines.append(f"div B = {ring.render(gauss)}")
    report.results.append(ring.check("maxwell-div-b", gauss))
    for k, rotation in enumerate(curl(field.electric, ring)):
        residual = rotation + _d(ring, field.magnetic[k], "t")
        report.results.append(ring.check("maxwell-faraday", residual, (k + 1,)))

    sources = inhomogeneous_maxwell(field, ring)
    report.lines.append(f"rho := div E = {ring.render(sources.rho)}")
    for k, component in enumerate(sources.current):
        report.lines.append(f"J{k + 1} := {ring.render(component)}")
    logger.info("maxwell: %s", report.summary)
    return report


# Yang-Mills


def gauge_potential(coords: CoordinateSystem, ring: Coefficients) -> DifferentialForm:
    """A = sum_i A[i] dx_i"""
    return DifferentialForm.one_form(
        coords,
        ring,
        {label: ring.field(coords, "A", int(label)) for label in coords.labels},
    )


def field_strength(potential: DifferentialForm) -> DifferentialForm:
    """F = dA + A^A"""
    return exterior_d(potential) + wedge(potential, potential)


def _component_formula(
    ring: Coefficients, coords: CoordinateSystem, i: int, j: int
) -> Coefficient:
    """d_i A_j - d_j A_i, plus [A_i, A_j] unless the ring commutes"""
    a_i, a_j = ring.field(coords, "A", i), ring.field(coords, "A", j)
    formula = ring.partial(a_j, coords, i - 1) - ring.partial(a_i, coords, j - 1)
    if not ring.commutative:
        formula = formula + a_i * a_j - a_j * a_i
    return formula


def _as_commutators(
    element: Element, coords: CoordinateSystem, gauge: World
) -> Element:
    """Rewrite each d_i A_j as [A_j, P_i] for comparison in a gauge world"""
    mapping = {}
    for i, j in itertools.product(range(1, gauge.dim + 1), repeat=2):
        letter = symbol("A", j, partials=(coords.symbol_name(i - 1),))
        (generator,) = letter.generators()
        mapping[generator] = commutator(gauge.gen("A", j), gauge.gen("P", i))
    return element.substitute(mapping)


def yang_mills_curvature_check(dim: int) -> SuiteReport:
    """
    F_ij = d_i A_j - d_j A_i + [A_i, A_j] for free coefficients, the gauge
    Bianchi identity dF + A^F - F^A = 0, agreement with the commutator
    curvature [Xdot_i, Xdot_j] of a gauge world, and the commuting case.
    """
    if not 1 <= dim <= min(MAX_GAUGE_DIM, config.MAX_DIM):
        raise DimOutOfRange(dim, 1, min(MAX_GAUGE_DIM, config.MAX_DIM))
    coords = CoordinateSystem.indexed(dim)
    report = SuiteReport(suite="yang-mills", parameters={"dim": dim})
    free = free_coefficients()
    potential = gauge_potential(coords, free)
    strength = field_strength(potential)
    report.lines.append(f"A = {potential}")
    report.lines.append(f"F = dA + A^A = {strength}")
    gauge = gauge_world(dim)
    commutator_curvature = curvature_table(dim, gauge)
    pairs: List[Tuple[int, int]] = list(itertools.combinations(range(1, dim + 1), 2))
    for i, j in pairs:
        component = strength.coefficient(str(i), str(j))
        report.results.append(
            free.check(
                "yang-mills-component",
                component - _component_formula(free, coords, i, j),
                (i, j),
            )
        )
        report.results.append(
            CheckResult.of(
                "yang-mills-commutator-curvature",
                normalize(
                    _as_commutators(component, coords, gauge)
                    - commutator_curvature[(i, j)],
                    gauge,
                ),
                gauge,
                (i, j),
            )
        )

    bianchi = (
        exterior_d(strength) + wedge(potential, strength) - wedge(strength, potential)
    )
    report.results.append(
        free.check(
            "gauge-bianchi",
            _first_coefficient(bianchi),
            note=None if dim >= 3 else "no 3-forms below dimension 3",
        )
    )

    commuting = commutative_coefficients()
    abelian = field_strength(gauge_potential(coords, commuting))
    for i, j in pairs:
        residual = abelian.coefficient(str(i), str(j)) - _component_formula(
            commuting, coords, i, j
        )
        report.results.append(
            commuting.check("yang-mills-commuting", residual, (i, j))
        )
    vanishing = field_strength(DifferentialForm.zero(coords, free))
    report.results.append(
        free.check("yang-mills-zero-potential", _first_coefficient(vanishing))
    )
    logger.info("yang-mills: %s", report.summary)
    return report


def _first_coefficient(form: DifferentialForm) -> Coefficient:
    for _, coef in form.items():
        return coef
    return form.coefficients.zero()
