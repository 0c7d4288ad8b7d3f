"""
The catalog of runnable suites. Each suite turns a SuiteSpec into a
SuiteReport; the catalog resolves names, runs one suite or all of them
and merges reports in catalog order.
"""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from config import config
from discrete import (
    WalkConfig,
    discrete_leibniz_check,
    naive_leibniz_check,
    series_world,
    simulate_walk,
    walk_commutator_check,
)
from errors import UnknownSuite
from evaluator import evaluate_text
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
from maxwell import weyl_maxwell_derivation, yang_mills_curvature_check
from models import CheckResult, SuiteReport, SuiteSpec
from oracle import IDENTITIES, run_identity
from properties import (
    confluence_check,
    derivation_property_check,
    jacobi_property_check,
    leibniz_property_check,
    scalar_property_check,
)
from world_files import load_world_file
from worlds import flat_world, metric_world

logger = logging.getLogger(__name__)


class Suite(ABC):
    """Abstract base class for all suites"""

    @abstractmethod
    def get_suite_definition(self) -> Dict[str, Any]:
        """Name, description and accepted parameters of this suite"""

    @abstractmethod
    def execute(self, spec: SuiteSpec) -> SuiteReport:
        """Run the suite with the given parameters"""


def merge(name: str, reports: List[SuiteReport], **parameters: Any) -> SuiteReport:
    """One report holding the lines and results of several"""
    merged = SuiteReport(suite=name, parameters=parameters)
    for report in reports:
        merged.lines.extend(report.lines)
        merged.results.extend(report.results)
    return merged


class CheckSuite(Suite):
    """A suite backed by a plain function of its SuiteSpec"""

    def __init__(
        self,
        name: str,
        description: str,
        run: Callable[[SuiteSpec], SuiteReport],
        parameters: tuple = (),
    ):
        self.name = name
        self.description = description
        self.run = run
        self.parameters = parameters

    def get_suite_definition(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "parameters": list(self.parameters),
        }

    def execute(self, spec: SuiteSpec) -> SuiteReport:
        report = self.run(spec)
        report.suite = self.name
        return report


# Parameter defaults


def _dim(spec: SuiteSpec, default: Optional[int] = None) -> int:
    if spec.dim is not None:
        return spec.dim
    return config.DEFAULT_DIM if default is None else default


def _maxlen(spec: SuiteSpec, default: int) -> int:
    return spec.maxlen if spec.maxlen is not None else default


# Suite bodies


def _hamilton(spec: SuiteSpec) -> SuiteReport:
    d = _dim(spec)
    if spec.world_file:
        return hamilton_check(load_world_file(spec.world_file))
    flat = flat_world(d)
    reports = [hamilton_check(flat), hamilton_check(metric_world(d))]
    if spec.hamiltonian:
        extra = evaluate_text(spec.hamiltonian, flat)
        reports.append(hamilton_check(flat, [extra]))
    return merge("hamilton", reports, dim=d)


def _curvature(spec: SuiteSpec) -> SuiteReport:
    maxlen = _maxlen(spec, 2)
    return merge(
        "curvature",
        [
            curvature_formula_check(_dim(spec), maxlen),
            curvature_operator_check(maxlen),
        ],
        dim=_dim(spec),
        maxlen=maxlen,
    )


def _discrete_leibniz(spec: SuiteSpec) -> SuiteReport:
    maxlen = _maxlen(spec, 2)
    return merge(
        "discrete-leibniz",
        [
            discrete_leibniz_check(maxlen, series_world(spec.horizon)),
            discrete_leibniz_check(
                maxlen, series_world(spec.horizon, commuting=True)
            ),
        ],
        maxlen=maxlen,
        horizon=spec.horizon or config.SERIES_HORIZON,
    )


def _walk(spec: SuiteSpec) -> SuiteReport:
    cfg = WalkConfig(
        steps=config.WALK_STEPS,
        delta=Fraction(1, 2),
        tau=Fraction(1, 4),
        seed=config.SEED if spec.seed is None else spec.seed,
    )
    walk = simulate_walk(cfg)
    report = SuiteReport(
        suite="walk", parameters={"steps": cfg.steps, "seed": cfg.seed}
    )
    report.lines.append(walk.render_text())
    report.results.append(
        CheckResult(
            identity="diffusion-constant",
            residual=f"{walk.min_k}..{walk.max_k} vs {walk.expected_k}",
            passed=walk.passed,
            note=f"mean {walk.mean_k}",
        )
    )
    return report


def _oracle(identity: str) -> Callable[[SuiteSpec], SuiteReport]:
    def run(spec: SuiteSpec) -> SuiteReport:
        return run_identity(identity, spec.trials, spec.matrix_dim, spec.seed)

    return run


def _cases(spec: SuiteSpec) -> int:
    return spec.trials if spec.trials is not None else 200


DIM = ("dim",)
DIM_MAXLEN = ("dim", "maxlen")
ORACLE = ("trials", "matrix_dim", "seed")
PROPERTY = ("trials", "seed", "dim")


def default_suites() -> List[Suite]:
    """Every suite, in catalog order"""
    suites: List[Suite] = [
        CheckSuite(
            "hamilton",
            "[P_i,H] = -dH/dX_i and [X_i,H] = dH/dP_i in flat and metric worlds",
            _hamilton,
            ("dim", "hamiltonian", "world_file"),
        ),
        CheckSuite(
            "quantum-hamilton",
            "i*hbar*Xdot = [X,H] for H = (1/2) sum P^2",
            lambda s: quantum_hamilton_check(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "flat-partials",
            "partials as commutators, and flat partials commute",
            lambda s: flat_partials_check(_dim(s), _maxlen(s, 3)),
            DIM_MAXLEN,
        ),
        CheckSuite(
            "curvature",
            "[Xdot_i,Xdot_j] = d_iA_j - d_jA_i + [A_i,A_j] and its operator form",
            _curvature,
            DIM_MAXLEN,
        ),
        CheckSuite(
            "metric-lemma",
            "Xdot = gP and [X_r, Xdot_k] = g_rk for H = (1/2) g P P",
            lambda s: metric_lemma_check(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "fdot",
            "Fdot = (1/2)(Xdot_k dF/dX_k + dF/dX_k Xdot_k) for central g",
            lambda s: fdot_symmetrized_check(_dim(s), _maxlen(s, 3)),
            DIM_MAXLEN,
        ),
        CheckSuite(
            "levi-civita-free",
            "[X_i,[X_j,Xddot_k]] = D[X_i,g_jk] + 2 Gamma_kij in the free algebra",
            lambda s: levi_civita_free_identity(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "levi-civita-corollary",
            "Gamma = 0 and [X_i,[X_j,Xddot_k]] = 0 for H = (1/2) P^2 + V",
            lambda s: levi_civita_corollary_check(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "weyl-connection",
            "Gamma_kij + Gamma_ikj = nabla_j g_ik, free case up to the asymmetry term",
            lambda s: weyl_connection_identity(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "derivation-of-bracket",
            "D[A,B] = [DA,B] + [A,DB] and Dg_YZ = [DY,DZ] + [Y,D^2 Z]",
            lambda s: derivation_of_bracket_check(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "christoffel",
            "Levi-Civita formula from metric compatibility, commutative world",
            lambda s: classical_christoffel_check(_dim(s)),
            DIM,
        ),
        CheckSuite(
            "bianchi",
            "[[nabla_a,nabla_b],nabla_c] + cyclic = 0 for all n^3 triples",
            lambda s: bianchi_check(_dim(s, 3)),
            DIM,
        ),
        CheckSuite(
            "discrete-leibniz",
            "nabla = [., J/h] satisfies Leibniz on series words",
            _discrete_leibniz,
            ("maxlen", "horizon"),
        ),
        CheckSuite(
            "naive-leibniz",
            "the plain difference quotient needs the shifted Leibniz rule",
            lambda s: naive_leibniz_check(series_world(s.horizon)),
            ("horizon",),
        ),
        CheckSuite(
            "walk-commutator",
            "[X, Xdot] = J (X' - X)^2 / tau",
            lambda s: walk_commutator_check(series_world(s.horizon, commuting=True)),
            ("horizon",),
        ),
        CheckSuite(
            "walk",
            "(X' - X)^2 / tau is constant on a seeded +-delta walk",
            _walk,
            ("seed",),
        ),
        CheckSuite(
            "maxwell",
            "d(lambda) gives E and B; d(d(lambda)) = 0 gives Maxwell's equations",
            lambda s: weyl_maxwell_derivation(),
        ),
        CheckSuite(
            "yang-mills",
            "F = dA + A^A against the commutator curvature",
            lambda s: yang_mills_curvature_check(_dim(s)),
            DIM,
        ),
    ]
    for identity in IDENTITIES:
        suites.append(
            CheckSuite(
                f"oracle-{identity}",
                f"matrix oracle: {identity}",
                _oracle(identity),
                ORACLE,
            )
        )
    suites.extend(
        [
            CheckSuite(
                "leibniz-property",
                "[AB,C] = [A,C]B + A[B,C] on random elements",
                lambda s: leibniz_property_check(_cases(s), s.seed, _dim(s)),
                PROPERTY,
            ),
            CheckSuite(
                "jacobi-property",
                "Jacobi on random elements of every canonical world",
                lambda s: jacobi_property_check(_cases(s), s.seed, _dim(s)),
                PROPERTY,
            ),
            CheckSuite(
                "derivation-property",
                "every derivation obeys Leibniz after normalization",
                lambda s: derivation_property_check(_cases(s), s.seed, _dim(s)),
                PROPERTY,
            ),
            CheckSuite(
                "confluence",
                "leftmost and rightmost rewriting agree",
                lambda s: confluence_check(_dim(s), _maxlen(s, 4)),
                DIM_MAXLEN,
            ),
            CheckSuite(
                "scalar-property",
                "exact scalar arithmetic",
                lambda s: scalar_property_check(_cases(s), s.seed),
                ("trials", "seed"),
            ),
        ]
    )
    return suites


class SuiteCatalog:
    """Resolves suite names and runs them"""

    def __init__(self, jobs: Optional[int] = None):
        self.suites: Dict[str, Suite] = {}
        self.jobs = jobs if jobs is not None else config.PARALLEL_JOBS

    @classmethod
    def default(cls, jobs: Optional[int] = None) -> "SuiteCatalog":
        catalog = cls(jobs)
        for suite in default_suites():
            catalog.register_suite(suite)
        return catalog

    def register_suite(self, suite: Suite) -> None:
        """Register any suite that implements the Suite interface"""
        name = suite.get_suite_definition().get("name")
        if not name:
            raise ValueError("Suite must have a 'name' in its definition")
        self.suites[name] = suite

    def names(self) -> List[str]:
        return list(self.suites)

    def get_suite_definitions(self) -> List[Dict[str, Any]]:
        return [suite.get_suite_definition() for suite in self.suites.values()]

    def run(self, spec: SuiteSpec) -> SuiteReport:
        """Run one suite by name"""
        if spec.name not in self.suites:
            raise UnknownSuite(spec.name, self.names())
        logger.info("running suite %s", spec.name)
        return self.suites[spec.name].execute(spec)

    def run_all(self, spec: SuiteSpec) -> List[SuiteReport]:
        """Every suite with the shared parameters, reports in catalog order"""
        specs = [spec.model_copy(update={"name": name}) for name in self.names()]
        if self.jobs <= 1:
            return [self.run(s) for s in specs]
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            return list(pool.map(self.run, specs))
