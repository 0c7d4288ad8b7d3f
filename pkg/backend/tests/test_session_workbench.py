"""
Tests for sessions, the workbench and the line-oriented REPL.
"""

import io
import os

import pytest

from algebra import Element
from config import Config
from errors import NcwError
from repl import HELP, Repl, describe_error
from session_manager import SessionManager
from worlds import flat_world, gauge_world


@pytest.mark.unit
class TestSessionManager:
    def test_session_ids_count_up(self, flat2):
        manager = SessionManager()
        assert manager.create_session(flat2) == "session_1"
        assert manager.create_session(flat2) == "session_2"
        assert manager.get_session("session_3") is None

    def test_history_is_bounded(self, flat2):
        manager = SessionManager(max_history=2)
        sid = manager.create_session(flat2)
        assert manager.get_history(sid) is None
        for n in range(3):
            manager.add_entry(sid, f"in{n}", f"out{n}")
        assert manager.get_history(sid) == "in1  =>  out1\nin2  =>  out2"

    def test_switching_worlds_drops_bindings(self, flat2, gauge2):
        manager = SessionManager()
        sid = manager.create_session(flat2)
        manager.bind(sid, "a", Element.one())
        manager.switch_world(sid, gauge2)
        session = manager.get_session(sid)
        assert session.world is gauge2
        assert session.bindings == {}

    def test_clear_session(self, flat2):
        manager = SessionManager()
        sid = manager.create_session(flat2)
        manager.bind(sid, "a", Element.one())
        manager.add_entry(sid, "a", "1")
        manager.clear_session(sid)
        assert manager.get_history(sid) is None
        assert manager.get_session(sid).bindings == {}

    def test_history_of_unknown_session(self):
        assert SessionManager().get_history("nope") is None
        assert SessionManager().get_history(None) is None


@pytest.mark.unit
class TestWorkbenchWorlds:
    def test_builtin_worlds(self, workbench):
        assert workbench.world() == flat_world(2)
        assert workbench.world("flat", 3).dim == 3
        assert workbench.world("gauge").name == "gauge"
        assert len(workbench.world("series").generators) == 4

    def test_unknown_world(self, workbench):
        with pytest.raises(NcwError, match="unknown world"):
            workbench.world("atlantis")

    def test_world_folder(self, workbench, world_dir):
        loaded, failed = workbench.add_world_folder(str(world_dir))
        assert loaded == 2
        assert failed == ["broken.world"]
        assert workbench.world("flat3").dim == 3
        analytics = workbench.get_world_analytics()
        assert analytics["total_worlds"] == 2
        assert analytics["world_names"] == ["flat3", "series3"]
        assert "flat" in analytics["builtin_worlds"]

    def test_missing_folder(self, workbench, tmp_path):
        assert workbench.add_world_folder(str(tmp_path / "missing")) == (0, [])

    def test_world_from_path(self, workbench, world_dir):
        world = workbench.world(str(world_dir / "series3.world"))
        assert world.name == "series3"
        assert "series3" in workbench.worlds


@pytest.mark.unit
class TestWorkbenchEvaluation:
    def test_normalize(self, workbench):
        flat = workbench.world("flat")
        assert workbench.normalize("[X[1],P[1]]", flat) == "1"
        assert workbench.normalize("P[1]*X[1]", flat) == "X[1]*P[1] - 1"

    def test_let_bindings(self, workbench):
        sid = workbench.create_session()
        assert workbench.evaluate(sid, "a = X[1] + 1") == "a = X[1] + 1"
        assert workbench.evaluate(sid, "a*a") == "X[1]*X[1] + 2*X[1] + 1"

    def test_history_is_recorded_and_trimmed(self, workbench):
        sid = workbench.create_session()
        for text in ("1", "2", "3", "[X[1],P[1]]"):
            workbench.evaluate(sid, text)
        history = workbench.session_manager.get_history(sid).splitlines()
        assert len(history) == 3
        assert history[-1] == "[X[1],P[1]]  =>  1"

    def test_unknown_session(self, workbench):
        with pytest.raises(NcwError):
            workbench.evaluate("session_99", "1")


@pytest.fixture
def repl(workbench):
    return Repl(workbench, flat_world(2))


@pytest.mark.unit
class TestRepl:
    def test_expressions(self, repl):
        assert repl.execute("[X[1],P[1]]") == "1"
        assert repl.execute("[X[1],X[2]]") == "0"
        assert repl.execute("") is None
        assert repl.execute("# a comment") is None

    def test_let_and_bindings(self, repl):
        assert repl.execute(":bindings") == "no bindings"
        assert repl.execute(":let a = P[1]") == "a = P[1]"
        assert repl.execute("b = a*a") == "b = P[1]*P[1]"
        assert repl.execute(":bindings") == "a = P[1]\nb = P[1]*P[1]"
        assert repl.execute("[X[1],b]") == "2*P[1]"

    def test_let_needs_an_equals_sign(self, repl):
        with pytest.raises(NcwError):
            repl.execute(":let a")

    def test_switching_worlds(self, repl):
        repl.execute("a = X[1]")
        assert repl.execute(":world gauge") == "world gauge"
        assert repl.session.world == gauge_world(2)
        assert repl.execute(":bindings") == "no bindings"
        curvature = repl.execute("[Xdot[1],Xdot[2]]")
        assert curvature != "0"
        assert "A[1]*A[2]" in curvature

    def test_world_with_dimension(self, repl):
        assert repl.execute(":world flat 3") == "world flat"
        assert repl.session.world.dim == 3
        assert repl.execute(":world").startswith("world flat")

    @pytest.mark.parametrize("line", [":world flat x", ":world a b c", ":frob"])
    def test_bad_commands(self, repl, line):
        with pytest.raises(NcwError):
            repl.execute(line)

    def test_history(self, repl):
        assert repl.execute(":history") == "no history"
        repl.execute("[X[1],P[1]]")
        assert repl.execute(":history") == "[X[1],P[1]]  =>  1"

    def test_help(self, repl):
        assert repl.execute(":help") == HELP

    def test_errors_keep_the_session_alive(self, repl):
        output = repl.handle("[X[1],")
        lines = output.splitlines()
        assert lines[0].startswith("error: 1:7:")
        assert lines[1] == "  [X[1],"
        assert lines[2] == "  " + " " * 6 + "^"
        assert repl.handle("Q[1]").startswith("error: ")
        assert repl.handle("[X[1],P[1]]") == "1"

    def test_series_horizon_is_reported(self, repl):
        assert repl.execute(":world series 2") == "world series"
        assert repl.handle("[X[2],J]") == (
            "error: shifting index 3 passes the series horizon N=2"
        )
        assert repl.handle("[X[1],J]") == "-J*X[1] + J*X[2]"

    def test_describe_plain_error(self):
        assert describe_error(NcwError("boom")) == "error: boom"

    def test_run_stops_at_quit(self, repl):
        out = io.StringIO()
        lines = [":help", "[X[1],P[1]]", ":quit", "[X[1],P[1]]"]
        assert repl.run(lines, out) == 0
        assert repl.done
        text = out.getvalue()
        assert text.startswith(HELP)
        assert text.endswith("\n1\n")


@pytest.mark.unit
class TestConfig:
    def test_absolute_world_dir_is_kept(self, tmp_path):
        assert Config(WORLD_DIR=str(tmp_path)).world_dir() == str(tmp_path)

    def test_relative_world_dir_starts_at_backend(self, test_config):
        backend = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
        assert test_config.world_dir() == os.path.join(backend, "no-such-world-dir")
        assert Config(WORLD_DIR="../worlds").world_dir() == os.path.join(
            os.path.dirname(backend), "worlds"
        )
