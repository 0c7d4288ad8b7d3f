from typing import Any, Dict, List, Optional, Sequence

from pydantic import BaseModel, Field, computed_field

from algebra import Element
from worlds import World, render


class CheckResult(BaseModel):
    """One verified equation: an identity at an index tuple with its residual"""

    identity: str  # Stable identity name, e.g. "hamilton-x"
    indices: List[int] = []  # Index tuple the identity was instantiated at
    subject: str = ""  # Optional operand, e.g. the word F being tested
    residual: str  # Rendered normalized residual ("0" when it vanishes)
    passed: bool
    note: Optional[str] = None

    @classmethod
    def of(
        cls,
        identity: str,
        residual: Element,
        world: Optional[World] = None,
        indices: Sequence[int] = (),
        subject: str = "",
        note: Optional[str] = None,
        expect_zero: bool = True,
    ) -> "CheckResult":
        """Result for an exact residual; controls pass when it does not vanish"""
        vanished = residual.is_zero()
        return cls(
            identity=identity,
            indices=list(indices),
            subject=subject,
            residual=render(residual, world),
            passed=vanished if expect_zero else not vanished,
            note=note,
        )

    def render_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.identity}"
        if self.indices:
            text += " (" + ",".join(str(i) for i in self.indices) + ")"
        if self.subject:
            text += f" F={self.subject}"
        text += f" residual={self.residual}"
        if self.note:
            text += f"  # {self.note}"
        return text


class SuiteReport(BaseModel):
    """Machine-readable report of one suite run"""

    suite: str
    parameters: Dict[str, Any] = {}
    results: List[CheckResult] = []
    lines: List[str] = []  # Derivation chain or other informational output

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def summary(self) -> str:
        good = sum(1 for result in self.results if result.passed)
        return f"{self.suite}: {good}/{len(self.results)} passed"

    def extend(self, results: Sequence[CheckResult]) -> "SuiteReport":
        self.results.extend(results)
        return self

    def render_text(self) -> str:
        out = list(self.lines)
        out.extend(result.render_text() for result in self.results)
        out.append(f"summary: {self.summary}")
        return "\n".join(out)


class SuiteSpec(BaseModel):
    """Which suite to run and with what parameters"""

    name: str
    dim: Optional[int] = None  # d for coordinate suites, n for bianchi
    maxlen: Optional[int] = None  # Word length for sweeps
    trials: Optional[int] = None  # Oracle trials
    seed: Optional[int] = None
    matrix_dim: Optional[int] = None  # Oracle matrix size
    hamiltonian: Optional[str] = None  # Extra user Hamiltonian expression
    horizon: Optional[int] = None  # Series horizon N
    world_file: Optional[str] = None


class WalkStep(BaseModel):
    """One increment of a random walk; rationals are rendered as p/q"""

    step: int
    position: str
    increment: str
    k: str  # (X' - X)^2 / tau for this step


class WalkReport(BaseModel):
    """Summary of a seeded +-delta walk"""

    steps: int
    delta: str
    tau: str
    seed: int
    min_k: str
    max_k: str
    mean_k: str
    expected_k: str  # delta^2 / tau
    constant: bool  # min == max == expected
    trajectory: List[WalkStep] = Field(default=[], exclude=True)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return self.constant

    def render_text(self) -> str:
        return "\n".join(
            [
                f"walk: steps={self.steps} delta={self.delta} tau={self.tau} "
                f"seed={self.seed}",
                f"k = (X'-X)^2/tau: min={self.min_k} max={self.max_k} "
                f"mean={self.mean_k}",
                f"expected delta^2/tau = {self.expected_k}",
                f"summary: walk: {'constant' if self.constant else 'NOT constant'}",
            ]
        )
