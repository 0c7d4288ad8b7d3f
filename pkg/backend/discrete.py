"""
Discrete calculus as commutators with the shift operator J, and an exact
seeded random walk for the diffusion-constant identity.

A series world holds time-series symbols X[0..N] and J with the rule
X[n]*J -> J*X[n+1]. The horizon N is fixed when the world is built;
anything that would shift an index past it raises IndexOverflow.
"""

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, TextIO, Union

import numpy as np

from algebra import Element, Generator, commutator
from config import config
from errors import IndexOverflow, InvalidWalkConfig
from models import CheckResult, SuiteReport, WalkReport, WalkStep
from scalars import Scalar
from worlds import (
    World,
    WorldBuilder,
    check_maxlen,
    normalize,
    render,
    words_up_to,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeriesWorld:
    world: World
    horizon: int
    commuting: bool = False

    def x(self, n: int) -> Element:
        return Element.gen(self.letter(n))

    def letter(self, n: int) -> Generator:
        if not 0 <= n <= self.horizon:
            raise IndexOverflow(n, self.horizon)
        return Generator("X", (n,))

    @property
    def shift_operator(self) -> Element:
        return Element.gen(Generator("J"))


def series_world(
    horizon: Optional[int] = None, commuting: bool = False
) -> SeriesWorld:
    """
    J < X[0] < ... < X[N] with X[n]*J -> J*X[n+1] for n < N; with
    ``commuting`` the X's also commute among themselves.
    """
    horizon = config.SERIES_HORIZON if horizon is None else horizon
    if horizon < 1:
        raise IndexOverflow(1, horizon)
    builder = WorldBuilder("series", 1)
    shift = builder.declare("J")
    xs = [builder.declare("X", n) for n in range(horizon + 1)]
    builder.param("tau")
    builder.param("h")
    for n in range(horizon):
        builder.rule((xs[n], shift), Element.word(shift, xs[n + 1]))
    builder.bound(xs[horizon], shift)
    if commuting:
        for m, xm in enumerate(xs):
            for xn in xs[m + 1 :]:
                builder.commute(xm, xn)
    return SeriesWorld(builder.build(), horizon, commuting)


def _max_index(f: Element) -> int:
    return max(
        (g.indices[0] for g in f.generators() if g.name == "X"),
        default=-1,
    )


def shift(f: Element, sw: SeriesWorld) -> Element:
    """f with every X index raised by one"""
    top = _max_index(f)
    if top >= sw.horizon:
        raise IndexOverflow(top + 1, sw.horizon)
    return f.substitute(
        {g: sw.x(g.indices[0] + 1) for g in f.generators() if g.name == "X"}
    )


def discrete_derivative(f: Element, sw: SeriesWorld) -> Element:
    """nabla f = [f, J/h], which normalizes to J*(shift(f) - f)/h"""
    top = _max_index(f)
    if top >= sw.horizon:
        raise IndexOverflow(top + 1, sw.horizon)
    step = sw.shift_operator * Scalar.param("h", -1)
    return normalize(commutator(f, step), sw.world)


def difference_quotient(f: Element, sw: SeriesWorld) -> Element:
    """The plain (shift(f) - f)/h, with no J in front"""
    return normalize((shift(f, sw) - f) * Scalar.param("h", -1), sw.world)


def _monomials(sw: SeriesWorld, maxlen: int) -> List[Element]:
    letters = [sw.letter(n) for n in range(sw.horizon)]
    return [Element.word(*word) for word in words_up_to(letters, maxlen)]


def _subject(f: Element, g: Element, sw: SeriesWorld) -> str:
    return f"{render(f, sw.world)}, {render(g, sw.world)}"


def discrete_leibniz_check(
    maxlen: int = 2, sw: Optional[SeriesWorld] = None
) -> SuiteReport:
    """
    nabla(f*g) = nabla(f)*g + f*nabla(g) for all monomials of length
    <= maxlen over X[0..N-1], plus the shift relation and the J*D form.
    """
    check_maxlen(maxlen)
    sw = sw or series_world()
    world = sw.world
    report = SuiteReport(
        suite="discrete-leibniz",
        parameters={"horizon": sw.horizon, "maxlen": maxlen, "commuting": sw.commuting},
    )
    j = sw.shift_operator
    for n in range(sw.horizon):
        residual = normalize(sw.x(n) * j - j * sw.x(n + 1), world)
        report.results.append(CheckResult.of("shift-relation", residual, world, (n,)))
    monomials = _monomials(sw, maxlen)
    for f in monomials:
        expected = j * difference_quotient(f, sw)
        report.results.append(
            CheckResult.of(
                "discrete-shift-form",
                normalize(discrete_derivative(f, sw) - expected, world),
                world,
                subject=render(f, world),
            )
        )
    for f in monomials:
        for g in monomials:
            residual = normalize(
                discrete_derivative(f * g, sw)
                - discrete_derivative(f, sw) * g
                - f * discrete_derivative(g, sw),
                world,
            )
            report.results.append(
                CheckResult.of(
                    "discrete-leibniz", residual, world, subject=_subject(f, g, sw)
                )
            )
    logger.info("discrete-leibniz: %s", report.summary)
    return report


def naive_leibniz_check(sw: Optional[SeriesWorld] = None) -> SuiteReport:
    """
    D(f*g) = D(f)*g + shift(f)*D(g) holds for the difference quotient D;
    the naive form D(f)*g + f*D(g) must fail for f = g = X[0].
    """
    sw = sw or series_world()
    world = sw.world
    report = SuiteReport(suite="naive-leibniz", parameters={"horizon": sw.horizon})
    for f in _monomials(sw, 1):
        for g in _monomials(sw, 1):
            residual = normalize(
                difference_quotient(f * g, sw)
                - difference_quotient(f, sw) * g
                - shift(f, sw) * difference_quotient(g, sw),
                world,
            )
            report.results.append(
                CheckResult.of(
                    "twisted-leibniz", residual, world, subject=_subject(f, g, sw)
                )
            )
    x0 = sw.x(0)
    naive = normalize(
        difference_quotient(x0 * x0, sw)
        - difference_quotient(x0, sw) * x0
        - x0 * difference_quotient(x0, sw),
        world,
    )
    report.results.append(
        CheckResult.of(
            "naive-leibniz-control",
            naive,
            world,
            subject=_subject(x0, x0, sw),
            note="expected nonzero: (X[1] - X[0])^2/h",
            expect_zero=False,
        )
    )
    return report


# The walk identity [X, Xdot] = J*(X' - X)^2/tau


def walk_velocity(sw: SeriesWorld) -> Element:
    """Xdot = J*(X[1] - X[0])/tau"""
    return sw.shift_operator * (sw.x(1) - sw.x(0)) * Scalar.param("tau", -1)


def walk_commutator_symbolic(sw: Optional[SeriesWorld] = None) -> Element:
    """normalize(X*Xdot - Xdot*X) with X = X[0]; needs commuting X's"""
    sw = sw or series_world(commuting=True)
    return normalize(commutator(sw.x(0), walk_velocity(sw)), sw.world)


def walk_commutator_check(sw: Optional[SeriesWorld] = None) -> SuiteReport:
    sw = sw or series_world(commuting=True)
    world = sw.world
    report = SuiteReport(
        suite="walk-commutator",
        parameters={"horizon": sw.horizon, "commuting": sw.commuting},
    )
    result = walk_commutator_symbolic(sw)
    step = sw.x(1) - sw.x(0)
    expected = normalize(
        sw.shift_operator * step * step * Scalar.param("tau", -1), world
    )
    report.lines.append(f"[X, Xdot] = {render(result, world)}")
    report.results.append(
        CheckResult.of("walk-commutator", normalize(result - expected, world), world)
    )
    constant = result.substitute({sw.letter(1): sw.x(0)})
    report.results.append(
        CheckResult.of(
            "walk-constant",
            normalize(constant, world),
            world,
            note="X[1] := X[0]",
        )
    )

    def unit_steps(s: Scalar) -> Scalar:
        return s.substitute({"tau": 1, "h": 1})

    specialized = result.map_scalars(unit_steps) - expected.map_scalars(unit_steps)
    report.results.append(
        CheckResult.of(
            "walk-unit-steps",
            normalize(specialized, world),
            world,
            note="tau = h = 1",
        )
    )
    return report


# Numeric walk


@dataclass(frozen=True)
class WalkConfig:
    steps: int = config.WALK_STEPS
    delta: Fraction = Fraction(1)
    tau: Fraction = Fraction(1)
    seed: int = config.SEED

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise InvalidWalkConfig(f"steps must be positive, got {self.steps}")
        if Fraction(self.delta) == 0:
            raise InvalidWalkConfig("delta must be nonzero")
        if Fraction(self.tau) <= 0:
            raise InvalidWalkConfig(f"tau must be positive, got {self.tau}")
        if self.seed < 0:
            raise InvalidWalkConfig(f"seed must be non-negative, got {self.seed}")
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "tau", Fraction(self.tau))


def simulate_walk(cfg: WalkConfig) -> WalkReport:
    """
    A +-delta walk from numpy's seeded generator, kept in exact rationals.
    For every step (X' - X)^2 / tau is forced to delta^2 / tau.
    """
    rng = np.random.default_rng(cfg.seed)
    signs = rng.choice(np.array([-1, 1]), size=cfg.steps)
    position = Fraction(0)
    values: List[Fraction] = []
    trajectory: List[WalkStep] = []
    for step, sign in enumerate(signs.tolist(), start=1):
        increment = cfg.delta * int(sign)
        position += increment
        k = increment * increment / cfg.tau
        values.append(k)
        trajectory.append(
            WalkStep(
                step=step, position=str(position), increment=str(increment), k=str(k)
            )
        )
    expected = cfg.delta * cfg.delta / cfg.tau
    low, high = min(values), max(values)
    mean = sum(values, Fraction(0)) / len(values)
    logger.info("walk of %d steps with seed %d", cfg.steps, cfg.seed)
    return WalkReport(
        steps=cfg.steps,
        delta=str(cfg.delta),
        tau=str(cfg.tau),
        seed=cfg.seed,
        min_k=str(low),
        max_k=str(high),
        mean_k=str(mean),
        expected_k=str(expected),
        constant=low == high == expected,
        trajectory=trajectory,
    )


def walk_to_csv(report: WalkReport, target: Union[str, Path, TextIO]) -> None:
    """Write step, position, increment, k rows"""
    if isinstance(target, (str, Path)):
        with open(target, "w", newline="", encoding="utf-8") as handle:
            walk_to_csv(report, handle)
        return
    writer = csv.writer(target)
    writer.writerow(["step", "position", "increment", "k"])
    for row in report.trajectory:
        writer.writerow([row.step, row.position, row.increment, row.k])


def parse_rational(text: str) -> Fraction:
    """'p/q' or an integer, as used by the walk flags"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidWalkConfig(f"'{text}' is not a rational p/q") from exc
