"""
Executable verification of the commutator-geometry identities: Hamilton's
equations, gauge curvature, the quadratic-Hamiltonian metric lemmas, the
Levi-Civita proof chain, the Weyl connection identity, Bianchi from Jacobi
and the classical Christoffel formula.

Every residual is exact; a check passes only when it normalizes to 0.
"""

import itertools
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import sympy as sp

from algebra import Element, Generator, Word, commutator
from derivations import (
    BRACKET_RIGHT,
    Derivation,
    apply,
    connection_table,
    covariant,
    curvature,
    curvature_table,
    dual_partial,
    formal_partial,
    hamiltonian,
    metric,
    partial,
    time_derivative,
    velocity,
)
from forms import CoordinateSystem, commutative_coefficients
from models import CheckResult, SuiteReport
from scalars import Scalar
from worlds import (
    World,
    check_dim,
    check_maxlen,
    commuting_coordinates_world,
    flat_world,
    free_world,
    gauge_world,
    metric_world,
    normalize,
    potential_world,
    render,
    words_up_to,
)

logger = logging.getLogger(__name__)

HALF = Scalar.rational(1, 2)


def _nonempty_words(letters: Sequence[Generator], maxlen: int) -> List[Word]:
    return [w for w in words_up_to(letters, maxlen) if w]


def _word_text(word: Word) -> str:
    return "*".join(str(g) for g in word) or "1"


def _delta(i: int, j: int) -> Element:
    return Element.scalar(1 if i == j else 0)


def _indices(dim: int) -> range:
    return range(1, dim + 1)


def _coordinate_words(world: World, maxlen: int) -> List[Word]:
    letters = world.family("X") + world.family("P")
    return _nonempty_words(letters, maxlen)


# Hamilton's equations


def default_hamiltonians(world: World) -> List[Element]:
    """Kinetic, linear, zero and a mixed cubic Hamiltonian for a flat world"""
    d = world.dim
    if world.has_macro("H"):
        return [world.macro("H"), Element.zero()]
    x1, xd = world.gen("X", 1), world.gen("X", d)
    p1, pd = world.gen("P", 1), world.gen("P", d)
    kinetic = Element.zero()
    for i in _indices(d):
        kinetic = kinetic + world.gen("P", i) * world.gen("P", i)
    return [
        kinetic * HALF,
        x1,
        Element.zero(),
        kinetic * HALF
        + x1 * x1 * pd
        + p1 * xd * p1
        - Element.scalar(Fraction(1, 3)) * xd,
    ]


def hamilton_check(
    world: World, hamiltonians: Optional[Sequence[Element]] = None
) -> SuiteReport:
    """
    [P_i, H] = -dH/dX_i and [X_i, H] = dH/dP_i, with the right-hand sides
    taken by formal differentiation of the coordinate-ordered normal form.
    """
    report = SuiteReport(
        suite="hamilton", parameters={"dim": world.dim, "world": world.name}
    )
    for h in hamiltonians if hamiltonians is not None else default_hamiltonians(world):
        h = normalize(h, world)
        subject = render(h, world)
        for i in _indices(world.dim):
            x, p = world.gen("X", i), world.gen("P", i)
            momentum = normalize(
                commutator(p, h) + formal_partial(h, world.generator("X", i)), world
            )
            position = normalize(
                commutator(x, h) - formal_partial(h, world.generator("P", i)), world
            )
            report.results.append(
                CheckResult.of("hamilton-p", momentum, world, (i,), subject)
            )
            report.results.append(
                CheckResult.of("hamilton-x", position, world, (i,), subject)
            )
    logger.info("hamilton: %s", report.summary)
    return report


def quantum_hamilton_check(dim: int) -> SuiteReport:
    """With i*hbar*dF/dt = [F, H] and H = (1/2) sum P^2: Xdot_i = -(i/hbar) P_i"""
    world = flat_world(dim)
    kinetic = Element.zero()
    for i in _indices(dim):
        kinetic = kinetic + world.gen("P", i) * world.gen("P", i)
    d_t = time_derivative(kinetic * HALF, quantum=True)
    factor = -Scalar.imaginary() * Scalar.param("hbar", -1)
    report = SuiteReport(suite="quantum-hamilton", parameters={"dim": dim})
    for i in _indices(dim):
        xdot = apply(d_t, world.gen("X", i), world)
        pdot = apply(d_t, world.gen("P", i), world)
        report.results.append(
            CheckResult.of(
                "quantum-xdot", xdot - world.gen("P", i) * factor, world, (i,)
            )
        )
        report.results.append(CheckResult.of("quantum-pdot", pdot, world, (i,)))
        restored = xdot * (Scalar.imaginary() * Scalar.param("hbar"))
        report.results.append(
            CheckResult.of(
                "quantum-ihbar-xdot", restored - world.gen("P", i), world, (i,)
            )
        )
    return report


def flat_partials_check(dim: int, maxlen: int = 3) -> SuiteReport:
    """Partials as commutators behave like partials, and flat partials commute"""
    check_maxlen(maxlen)
    world = flat_world(dim)
    report = SuiteReport(
        suite="flat-partials", parameters={"dim": dim, "maxlen": maxlen}
    )
    for i, j in itertools.product(_indices(dim), repeat=2):
        x_j, p_j = world.gen("X", j), world.gen("P", j)
        cases = [
            ("partial-x", apply(partial(world, i), x_j, world) - _delta(i, j)),
            ("partial-p", apply(partial(world, i), p_j, world)),
            (
                "dual-partial-p",
                apply(dual_partial(world, i), p_j, world) - _delta(i, j),
            ),
            ("dual-partial-x", apply(dual_partial(world, i), x_j, world)),
        ]
        for name, residual in cases:
            report.results.append(
                CheckResult.of(name, normalize(residual, world), world, (i, j))
            )
    for i, j in itertools.combinations(_indices(dim), 2):
        for word in _coordinate_words(world, maxlen):
            residual = curvature(
                partial(world, i), partial(world, j), Element.word(*word), world
            )
            report.results.append(
                CheckResult.of(
                    "flat-commuting-partials", residual, world, (i, j), _word_text(word)
                )
            )
    return report


# Gauge curvature


def curvature_formula_check(dim: int, maxlen: int = 2) -> SuiteReport:
    """
    R_ij = [Xdot_i, Xdot_j] = d_i A_j - d_j A_i + [A_i, A_j] with
    d_i A_j := [A_j, P_i], and its operator form
    [[Xdot_i, Xdot_j], F] = [nabla_i, nabla_j] F.
    """
    check_maxlen(maxlen)
    world = gauge_world(dim)
    report = SuiteReport(suite="curvature", parameters={"dim": dim, "maxlen": maxlen})
    table = curvature_table(dim, world)
    a = {i: world.gen("A", i) for i in _indices(dim)}
    p = {i: world.gen("P", i) for i in _indices(dim)}
    letters = list(world.generators)
    words = _nonempty_words(letters, maxlen)
    for i, j in itertools.combinations(_indices(dim), 2):
        formula = (
            commutator(a[j], p[i]) - commutator(a[i], p[j]) + commutator(a[i], a[j])
        )
        report.results.append(
            CheckResult.of(
                "curvature-formula",
                normalize(table[(i, j)] - formula, world),
                world,
                (i, j),
            )
        )
        flat_limit = table[(i, j)].substitute(
            {world.generator("A", k): Element.zero() for k in a}
        )
        report.results.append(
            CheckResult.of(
                "curvature-flat-limit", normalize(flat_limit, world), world, (i, j)
            )
        )
        for word in words:
            f = Element.word(*word)
            residual = normalize(
                commutator(table[(i, j)], f)
                - curvature(covariant(world, i), covariant(world, j), f, world),
                world,
            )
            report.results.append(
                CheckResult.of(
                    "curvature-operator", residual, world, (i, j), _word_text(word)
                )
            )
    for (i, j), residual in table.antisymmetry_residuals(world).items():
        report.results.append(
            CheckResult.of("curvature-antisymmetry", residual, world, (i, j))
        )
    for i, j in itertools.product(_indices(dim), repeat=2):
        expected = _delta(i, j) - commutator(world.gen("X", i), a[j])
        report.results.append(
            CheckResult.of(
                "gauge-metric",
                normalize(metric(world, i, j) - expected, world),
                world,
                (i, j),
            )
        )
    logger.info("curvature: %s", report.summary)
    return report


def curvature_operator_check(maxlen: int = 2) -> SuiteReport:
    """[nabla_X, nabla_Y] F = [[L_X, L_Y], F] for free representatives"""
    check_maxlen(maxlen)
    lam_x, lam_y = Generator("Lambda", (1,)), Generator("Lambda", (2,))
    f_letter = Generator("F")
    world = free_world([lam_x, lam_y, f_letter])
    nabla_x = Derivation(BRACKET_RIGHT, Element.gen(lam_x), "nabla_X")
    nabla_y = Derivation(BRACKET_RIGHT, Element.gen(lam_y), "nabla_Y")
    bracket = commutator(Element.gen(lam_x), Element.gen(lam_y))
    report = SuiteReport(suite="curvature-operator", parameters={"maxlen": maxlen})
    for word in _nonempty_words(world.generators, maxlen):
        f = Element.word(*word)
        residual = normalize(
            curvature(nabla_x, nabla_y, f, world) - commutator(bracket, f), world
        )
        report.results.append(
            CheckResult.of("curvature-operator", residual, world, (), _word_text(word))
        )
    return report


# Quadratic Hamiltonian lemmas


def metric_lemma_check(dim: int) -> SuiteReport:
    """Xdot_k = [X_k, H] = sum_j g_kj P_j and [X_r, Xdot_k] = g_rk"""
    world = metric_world(dim)
    h = hamiltonian(world)
    report = SuiteReport(suite="metric-lemma", parameters={"dim": dim})
    for k in _indices(dim):
        expected = Element.zero()
        for j in _indices(dim):
            expected = expected + world.gen("g", k, j) * world.gen("P", j)
        xdot = velocity(world, k)
        report.results.append(
            CheckResult.of(
                "metric-velocity", normalize(xdot - expected, world), world, (k,)
            )
        )
        for r in _indices(dim):
            report.results.append(
                CheckResult.of(
                    "metric-g",
                    normalize(metric(world, r, k) - world.gen("g", r, k), world),
                    world,
                    (r, k),
                )
            )
    symmetric = Element.zero()
    for i, j in itertools.product(_indices(dim), repeat=2):
        g, pi, pj = world.gen("g", i, j), world.gen("P", i), world.gen("P", j)
        symmetric = symmetric + g * pi * pj + pi * pj * g
    report.results.append(
        CheckResult.of(
            "metric-symmetric-form",
            normalize(symmetric * Scalar.rational(1, 4) - h, world),
            world,
        )
    )
    if dim == 1:
        flat = flat_world(1)
        limit = h.substitute({world.generator("g", 1, 1): Element.one()})
        sub = hamilton_check(flat, [limit])
        for result in sub.results:
            result.identity = "metric-flat-limit-" + result.identity
        report.extend(sub.results)
    return report


def fdot_symmetrized_check(dim: int, maxlen: int = 3) -> SuiteReport:
    """[F, H] = (1/2) sum_i (Xdot_i d_iF + d_iF Xdot_i) for words F over X, P"""
    check_maxlen(maxlen)
    world = metric_world(dim)
    h = hamiltonian(world)
    xdots = {i: velocity(world, i) for i in _indices(dim)}
    report = SuiteReport(suite="fdot", parameters={"dim": dim, "maxlen": maxlen})
    for word in _coordinate_words(world, maxlen):
        f = Element.word(*word)
        symmetrized = Element.zero()
        for i in _indices(dim):
            d_f = apply(partial(world, i), f, world)
            symmetrized = symmetrized + xdots[i] * d_f + d_f * xdots[i]
        residual = normalize(commutator(f, h) - symmetrized * HALF, world)
        report.results.append(
            CheckResult.of("fdot-symmetrized", residual, world, (), _word_text(word))
        )
    logger.info("fdot: %s", report.summary)
    return report


# Levi-Civita


def _free_coordinates_world(dim: int) -> World:
    check_dim(dim)
    letters = [Generator("X", (i,)) for i in _indices(dim)] + [Generator("H")]
    return free_world(letters, dim)


def levi_civita_free_residual(world: World, i: int, j: int, k: int) -> Element:
    """
    [X_i, [X_j, Xddot_k]] - D([X_i, g_jk])
    - (nabla_i g_jk + nabla_j g_ik - nabla_k g_ij), unnormalized
    """
    d_t = time_derivative(world.gen("H"))
    xddot = d_t.raw(velocity(world, k))
    x_i, x_j = world.gen("X", i), world.gen("X", j)

    def g(a: int, b: int) -> Element:
        return commutator(world.gen("X", a), velocity(world, b))

    connection = (
        covariant(world, i).raw(g(j, k))
        + covariant(world, j).raw(g(i, k))
        - covariant(world, k).raw(g(i, j))
    )
    return (
        commutator(x_i, commutator(x_j, xddot))
        - d_t.raw(commutator(x_i, g(j, k)))
        - connection
    )


def levi_civita_free_identity(dim: int) -> SuiteReport:
    """
    In the free algebra on X[1..d], H:
    [X_i, [X_j, Xddot_k]] = D([X_i, g_jk]) + 2 Gamma_kij
    """
    world = _free_coordinates_world(dim)
    report = SuiteReport(suite="levi-civita-free", parameters={"dim": dim})
    for i, j, k in itertools.product(_indices(dim), repeat=3):
        report.results.append(
            CheckResult.of(
                "levi-civita-free",
                normalize(levi_civita_free_residual(world, i, j, k), world),
                world,
                (i, j, k),
                note="2*Gamma_kij plus the [X_i,g_jk] correction",
            )
        )
        xddot = apply(time_derivative(world.gen("H")), velocity(world, k), world)
        left = commutator(world.gen("X", i), commutator(world.gen("X", j), xddot))
        degenerate = left.substitute({world.generator("H"): Element.zero()})
        report.results.append(
            CheckResult.of(
                "levi-civita-free-degenerate",
                normalize(degenerate, world),
                world,
                (i, j, k),
            )
        )
    logger.info("levi-civita-free: %s", report.summary)
    return report


def levi_civita_corollary_check(dim: int = 2) -> SuiteReport:
    """
    With H = (1/2) sum P^2 + V and [V, X_i] = 0 the metric is delta, every
    Gamma vanishes and [X_i, [X_j, Xddot_k]] normalizes to 0.
    """
    world = potential_world(dim)
    d_t = time_derivative(hamiltonian(world))
    report = SuiteReport(suite="levi-civita-corollary", parameters={"dim": dim})
    table = connection_table(dim, world)
    v = world.generator("V")
    xddot = {k: apply(d_t, velocity(world, k), world) for k in _indices(dim)}
    for i, j, k in itertools.product(_indices(dim), repeat=3):
        chain = apply(
            dual_partial(world, i),
            apply(dual_partial(world, j), xddot[k], world),
            world,
        )
        report.results.append(
            CheckResult.of("levi-civita-corollary", chain, world, (i, j, k))
        )
        report.results.append(
            CheckResult.of(
                "levi-civita-corollary-gamma", table[(k, i, j)], world, (k, i, j)
            )
        )
    for k in _indices(dim):
        without_potential = normalize(xddot[k].substitute({v: Element.zero()}), world)
        report.results.append(
            CheckResult.of(
                "levi-civita-corollary-no-potential", without_potential, world, (k,)
            )
        )
    return report


def weyl_connection_identity(dim: int) -> SuiteReport:
    """
    Gamma_kij + Gamma_ikj = nabla_j g_ik where g is symmetric (commuting
    coordinates), and in the free algebra up to the explicit asymmetry term
    (1/2)(nabla_i(g_jk - g_kj) + nabla_j(g_ki - g_ik) + nabla_k(g_ji - g_ij)).
    """
    report = SuiteReport(suite="weyl-connection", parameters={"dim": dim})
    symmetric_world = commuting_coordinates_world(dim)
    free = _free_coordinates_world(dim)
    for label, world in (
        ("weyl-connection", symmetric_world),
        ("weyl-connection-free", free),
    ):
        table = connection_table(dim, world)
        g = {
            (a, b): metric(world, a, b)
            for a, b in itertools.product(_indices(dim), repeat=2)
        }

        def nabla(index: int, value: Element) -> Element:
            return apply(covariant(world, index), value, world)

        for k, i, j in itertools.product(_indices(dim), repeat=3):
            residual = table[(k, i, j)] + table[(i, k, j)] - nabla(j, g[(i, k)])
            if world is free:
                asymmetry = (
                    nabla(i, g[(j, k)] - g[(k, j)])
                    + nabla(j, g[(k, i)] - g[(i, k)])
                    + nabla(k, g[(j, i)] - g[(i, j)])
                )
                residual = residual - asymmetry * HALF
            report.results.append(
                CheckResult.of(label, normalize(residual, world), world, (k, i, j))
            )
    for a, b in itertools.combinations(_indices(dim), 2):
        world = symmetric_world
        report.results.append(
            CheckResult.of(
                "metric-symmetry",
                normalize(metric(world, a, b) - metric(world, b, a), world),
                world,
                (a, b),
            )
        )
    return report


def derivation_of_bracket_check(dim: int = 2) -> SuiteReport:
    """D[A,B] = [DA,B] + [A,DB] and D g_YZ = [DY,DZ] + [Y,D^2 Z] in the free algebra"""
    world = _free_coordinates_world(dim)
    d_t = time_derivative(world.gen("H"))
    letters = [Element.gen(g) for g in world.generators]
    report = SuiteReport(suite="derivation-of-bracket", parameters={"dim": dim})

    def d(value: Element) -> Element:
        return apply(d_t, value, world)

    for (ia, a), (ib, b) in itertools.product(enumerate(letters), repeat=2):
        residual = d(commutator(a, b)) - commutator(d(a), b) - commutator(a, d(b))
        report.results.append(
            CheckResult.of(
                "derivation-of-bracket",
                normalize(residual, world),
                world,
                (ia + 1, ib + 1),
            )
        )
    for y, z in itertools.product(_indices(dim), repeat=2):
        x_y, x_z = world.gen("X", y), world.gen("X", z)
        g_yz = commutator(x_y, d(x_z))
        residual = d(g_yz) - commutator(d(x_y), d(x_z)) - commutator(x_y, d(d(x_z)))
        report.results.append(
            CheckResult.of(
                "derivative-of-metric", normalize(residual, world), world, (y, z)
            )
        )
    return report


# Bianchi


def bianchi_check(n: int) -> SuiteReport:
    """R_ab:c + R_ca:b + R_bc:a = 0 with R_ab = [N_a, N_b] and F:c = [F, N_c]"""
    check_dim(n)
    world = free_world([Generator("N", (a,)) for a in _indices(n)], n)
    report = SuiteReport(suite="bianchi", parameters={"n": n})

    def curvature_of(a: int, b: int) -> Element:
        return commutator(world.gen("N", a), world.gen("N", b))

    def covariant_of(f: Element, c: int) -> Element:
        return commutator(f, world.gen("N", c))

    for a, b, c in itertools.product(_indices(n), repeat=3):
        total = (
            covariant_of(curvature_of(a, b), c)
            + covariant_of(curvature_of(c, a), b)
            + covariant_of(curvature_of(b, c), a)
        )
        report.results.append(
            CheckResult.of("bianchi", normalize(total, world), world, (a, b, c))
        )
    logger.info("bianchi: %s", report.summary)
    return report


# Classical Christoffel formula


def classical_christoffel_check(dim: int) -> SuiteReport:
    """
    Metric compatibility d_k g_ij = g_sj Gam^s_ik + g_is Gam^s_jk together
    with Gam^s_jk = Gam^s_kj gives
    sum_s g_is Gam^s_jk = (1/2)(d_k g_ij - d_i g_jk + d_j g_ik).
    """
    check_dim(dim)
    coords = CoordinateSystem.indexed(dim)
    ring = commutative_coefficients()
    indices = _indices(dim)

    def g(i: int, j: int) -> sp.Expr:
        return ring.field(coords, "g", *sorted((i, j)))

    def gam(s: int, j: int, k: int) -> sp.Expr:
        return ring.field(coords, "Gam", s, *sorted((j, k)))

    def d(value: sp.Expr, k: int) -> sp.Expr:
        return ring.partial(value, coords, k - 1)

    compatibility: Dict[sp.Expr, sp.Expr] = {}
    for i, j, k in itertools.product(indices, repeat=3):
        compatibility[d(g(i, j), k)] = sum(
            (g(s, j) * gam(s, i, k) + g(i, s) * gam(s, j, k) for s in indices),
            ring.zero(),
        )
    flat = {derivative: ring.zero() for derivative in compatibility}
    report = SuiteReport(suite="christoffel", parameters={"dim": dim})
    for i, j, k in itertools.product(indices, repeat=3):
        formula = (d(g(i, j), k) - d(g(j, k), i) + d(g(i, k), j)) * sp.Rational(1, 2)
        lowered = sum((g(i, s) * gam(s, j, k) for s in indices), ring.zero())
        report.results.append(
            ring.check(
                "christoffel", formula.xreplace(compatibility) - lowered, (i, j, k)
            )
        )
        report.results.append(
            ring.check("christoffel-flat", formula.xreplace(flat), (i, j, k))
        )
    return report
