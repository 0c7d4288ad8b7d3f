from dataclasses import dataclass, field
from typing import Dict, List, Optional

from algebra import Element
from worlds import World


@dataclass
class Entry:
    """One evaluated input and its rendered result"""

    source: str  # What the user typed
    result: str  # Rendered normal form or error text


@dataclass
class Session:
    world: World
    bindings: Dict[str, Element] = field(default_factory=dict)
    history: List[Entry] = field(default_factory=list)


class SessionManager:
    """Manages evaluation sessions: a world, let-bindings and bounded history"""

    def __init__(self, max_history: int = 20):
        self.max_history = max_history
        self.sessions: Dict[str, Session] = {}
        self.session_counter = 0

    def create_session(self, world: World) -> str:
        """Create a new session over the given world"""
        self.session_counter += 1
        session_id = f"session_{self.session_counter}"
        self.sessions[session_id] = Session(world)
        return session_id

    def get_session(self, session_id: str) -> Optional[Session]:
        return self.sessions.get(session_id)

    def add_entry(self, session_id: str, source: str, result: str):
        """Record an input/result pair, keeping history within limits"""
        session = self.sessions[session_id]
        session.history.append(Entry(source=source, result=result))
        if len(session.history) > self.max_history:
            session.history = session.history[-self.max_history :]

    def bind(self, session_id: str, name: str, value: Element):
        self.sessions[session_id].bindings[name] = value

    def switch_world(self, session_id: str, world: World):
        """Move a session to another world; bindings belong to the old one"""
        session = self.sessions[session_id]
        session.world = world
        session.bindings.clear()

    def get_history(self, session_id: Optional[str]) -> Optional[str]:
        """Get formatted history for a session"""
        if not session_id or session_id not in self.sessions:
            return None

        entries = self.sessions[session_id].history
        if not entries:
            return None

        return "\n".join(f"{e.source}  =>  {e.result}" for e in entries)

    def clear_session(self, session_id: str):
        """Clear bindings and history of a session"""
        if session_id in self.sessions:
            self.sessions[session_id].bindings.clear()
            self.sessions[session_id].history = []
