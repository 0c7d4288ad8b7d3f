import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(name, str(default)))


@dataclass
class Config:
    """Configuration settings for the non-commutative worlds engine"""

    # World construction limits
    MAX_DIM: int = _env_int("NCW_MAX_DIM", 8)  # Largest d accepted by builders
    DEFAULT_DIM: int = _env_int("NCW_DEFAULT_DIM", 2)
    DEFAULT_MAXLEN: int = _env_int("NCW_DEFAULT_MAXLEN", 3)  # Word length for sweeps

    # Reproducibility
    SEED: int = _env_int("NCW_SEED", 20240611)

    # Matrix oracle settings
    ORACLE_TRIALS: int = _env_int("NCW_ORACLE_TRIALS", 100)
    ORACLE_DIM: int = _env_int("NCW_ORACLE_DIM", 4)  # Matrix size n
    ORACLE_TOLERANCE: float = float(os.getenv("NCW_ORACLE_TOLERANCE", "1e-8"))

    # Discrete calculus settings
    SERIES_HORIZON: int = _env_int("NCW_SERIES_HORIZON", 2)  # Last time index N
    WALK_STEPS: int = _env_int("NCW_WALK_STEPS", 10000)

    # Sessions and runtime
    MAX_HISTORY: int = _env_int("NCW_MAX_HISTORY", 20)  # REPL entries remembered
    PARALLEL_JOBS: int = _env_int("NCW_PARALLEL_JOBS", 1)  # Suites run at once
    LOG_LEVEL: str = os.getenv("NCW_LOG_LEVEL", "WARNING")

    # World files loaded by the HTTP service on startup
    WORLD_DIR: str = os.getenv("NCW_WORLD_DIR", "../worlds")

    def world_dir(self) -> str:
        """WORLD_DIR, with relative paths taken from the backend directory"""
        if os.path.isabs(self.WORLD_DIR):
            return self.WORLD_DIR
        here = os.path.dirname(os.path.abspath(__file__))
        return os.path.normpath(os.path.join(here, self.WORLD_DIR))


config = Config()
