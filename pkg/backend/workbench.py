import logging
import os
import re
from typing import Callable, Dict, List, Optional, Tuple

from algebra import Element
from discrete import series_world
from errors import NcwError
from evaluator import evaluate_text
from models import SuiteReport, SuiteSpec
from session_manager import SessionManager
from suites import SuiteCatalog
from world_files import load_world_file
from worlds import (
    World,
    commutative_world,
    commuting_coordinates_world,
    flat_world,
    gauge_world,
    metric_world,
    potential_world,
    render,
)

logger = logging.getLogger(__name__)

_LET = re.compile(r"^\s*(?P<name>[A-Za-z][A-Za-z0-9_]*)\s*=(?!=)\s*(?P<expr>.+)$")

BUILTIN_WORLDS: Dict[str, Callable[[int], World]] = {
    "flat": flat_world,
    "gauge": gauge_world,
    "metric": metric_world,
    "potential": potential_world,
    "coordinates": commuting_coordinates_world,
    "series": lambda horizon: series_world(horizon).world,
    "commutative": lambda _: commutative_world(),
}


class Workbench:
    """Main orchestrator: worlds, evaluation sessions and the suite catalog"""

    def __init__(self, config):
        self.config = config

        # Initialize core components
        self.session_manager = SessionManager(config.MAX_HISTORY)
        self.catalog = SuiteCatalog.default(config.PARALLEL_JOBS)
        self.worlds: Dict[str, World] = {}  # Worlds loaded from files, by name

    # Worlds

    def add_world_file(self, file_path: str) -> World:
        """Load one world file and register it under its declared name"""
        world = load_world_file(file_path)
        self.worlds[world.name] = world
        logger.info("loaded world %s from %s", world.name, file_path)
        return world

    def add_world_folder(self, folder_path: str) -> Tuple[int, List[str]]:
        """
        Load every ``.world`` file in a folder. Files that fail to parse
        are logged and skipped.

        Returns:
            Tuple of (number of worlds loaded, names of failed files)
        """
        if not os.path.isdir(folder_path):
            logger.warning("world folder %s does not exist", folder_path)
            return 0, []
        loaded, failed = 0, []
        for file_name in sorted(os.listdir(folder_path)):
            file_path = os.path.join(folder_path, file_name)
            if not (os.path.isfile(file_path) and file_name.endswith(".world")):
                continue
            try:
                self.add_world_file(file_path)
                loaded += 1
            except NcwError as e:
                logger.warning("skipping %s: %s", file_name, e)
                failed.append(file_name)
        return loaded, failed

    def world(self, name: Optional[str] = None, dim: Optional[int] = None) -> World:
        """
        A loaded world by name, a builtin world by name, or a world file
        path. Defaults to the flat world of the default dimension.
        """
        name = name or "flat"
        if name in self.worlds:
            return self.worlds[name]
        if name in BUILTIN_WORLDS:
            if name == "series":
                size = self.config.SERIES_HORIZON if dim is None else dim
            else:
                size = self.config.DEFAULT_DIM if dim is None else dim
            return BUILTIN_WORLDS[name](size)
        if os.path.isfile(name):
            return self.add_world_file(name)
        known = sorted(set(self.worlds) | set(BUILTIN_WORLDS))
        raise NcwError(f"unknown world '{name}'; known: {', '.join(known)}")

    # Evaluation

    def normalize(self, text: str, world: World) -> str:
        """Rendered normal form of an expression"""
        return render(evaluate_text(text, world), world)

    def create_session(self, world: Optional[World] = None) -> str:
        return self.session_manager.create_session(world or self.world())

    def evaluate(self, session_id: str, text: str) -> str:
        """
        Evaluate ``text`` in a session. ``name = expr`` binds the normal
        form of expr to name; anything else is normalized and rendered.
        """
        session = self.session_manager.get_session(session_id)
        if session is None:
            raise NcwError(f"unknown session '{session_id}'")
        match = _LET.match(text)
        if match:
            value = self._evaluate(session_id, match.group("expr"))
            self.session_manager.bind(session_id, match.group("name"), value)
            result = f"{match.group('name')} = {render(value, session.world)}"
        else:
            result = render(self._evaluate(session_id, text), session.world)
        self.session_manager.add_entry(session_id, text, result)
        return result

    def _evaluate(self, session_id: str, text: str) -> Element:
        session = self.session_manager.sessions[session_id]
        return evaluate_text(text, session.world, session.bindings)

    # Suites

    def run_suite(self, spec: SuiteSpec) -> SuiteReport:
        return self.catalog.run(spec)

    def run_all(self, spec: SuiteSpec) -> List[SuiteReport]:
        return self.catalog.run_all(spec)

    def get_world_analytics(self) -> Dict:
        """Names of the builtin and loaded worlds"""
        return {
            "total_worlds": len(self.worlds),
            "world_names": sorted(self.worlds),
            "builtin_worlds": list(BUILTIN_WORLDS),
        }
