import logging
from typing import Iterable, Iterator, Optional, TextIO

from errors import NcwError, PositionedError
from workbench import Workbench
from world_files import render_world
from worlds import World, render

try:
    import readline  # noqa: F401  line editing for input()
except ModuleNotFoundError:
    pass

logger = logging.getLogger(__name__)

HELP = """\
expressions are normalized in the current world, e.g. [X[1],P[1]]
  :let name = expr    bind the normal form of expr to name
  name = expr         same as :let
  :world name [dim]   switch to a builtin world, a loaded world or a file
  :world              show the current world
  :bindings           list bindings
  :history            show recent inputs and results
  :help               this text
  :quit               leave"""


def describe_error(error: NcwError) -> str:
    """Error message, with a caret line under syntax errors"""
    if isinstance(error, PositionedError):
        caret = error.caret()
        return f"error: {error}\n{caret}" if caret else f"error: {error}"
    return f"error: {error}"


class Repl:
    """Line-oriented session over one Workbench session"""

    def __init__(self, workbench: Workbench, world: Optional[World] = None):
        self.workbench = workbench
        self.session_id = workbench.create_session(world)
        self.done = False

    @property
    def session(self):
        return self.workbench.session_manager.get_session(self.session_id)

    def execute(self, line: str) -> Optional[str]:
        """Output for one input line; NcwError propagates"""
        line = line.strip()
        if not line or line.startswith("#"):
            return None
        if not line.startswith(":"):
            return self.workbench.evaluate(self.session_id, line)
        command, _, rest = line[1:].partition(" ")
        rest = rest.strip()
        if command in ("quit", "q"):
            self.done = True
            return None
        if command == "help":
            return HELP
        if command == "let":
            if "=" not in rest:
                raise NcwError("usage: :let name = expr")
            return self.workbench.evaluate(self.session_id, rest)
        if command == "world":
            return self.switch_world(rest)
        if command == "bindings":
            bindings = self.session.bindings
            if not bindings:
                return "no bindings"
            return "\n".join(
                f"{name} = {self.render(value)}" for name, value in bindings.items()
            )
        if command == "history":
            history = self.workbench.session_manager.get_history(self.session_id)
            return history or "no history"
        raise NcwError(f"unknown command ':{command}'; try :help")

    def render(self, value) -> str:
        return render(value, self.session.world)

    def switch_world(self, rest: str) -> str:
        if not rest:
            return render_world(self.session.world)
        parts = rest.split()
        if len(parts) > 2:
            raise NcwError("usage: :world name [dim]")
        dim = None
        if len(parts) == 2:
            if not parts[1].isdigit():
                raise NcwError(f"dimension must be a number, got '{parts[1]}'")
            dim = int(parts[1])
        world = self.workbench.world(parts[0], dim)
        self.workbench.session_manager.switch_world(self.session_id, world)
        return f"world {world.name}"

    def handle(self, line: str) -> Optional[str]:
        """Like execute, but errors become output and the session continues"""
        try:
            return self.execute(line)
        except NcwError as e:
            logger.info("input %r failed: %s", line, e)
            return describe_error(e)

    def run(self, lines: Iterable[str], out: TextIO) -> int:
        for line in lines:
            output = self.handle(line)
            if output is not None:
                print(output, file=out)
            if self.done:
                break
        return 0


def prompt_lines(prompt: str = "ncw> ") -> Iterator[str]:
    """Lines typed at an interactive prompt, until EOF or Ctrl-C"""
    while True:
        try:
            yield input(prompt)
        except (EOFError, KeyboardInterrupt):
            print()
            return
