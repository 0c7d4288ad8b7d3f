import logging
from typing import Any, Dict, List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.middleware.trustedhost import TrustedHostMiddleware
from pydantic import BaseModel

from config import config
from errors import NcwError
from models import SuiteReport, SuiteSpec
from workbench import Workbench

logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(title="Non-Commutative Worlds", root_path="")

# Add trusted host middleware for proxy
app.add_middleware(TrustedHostMiddleware, allowed_hosts=["*"])

# Enable CORS with proper settings for proxy
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
    expose_headers=["*"],
)

workbench = Workbench(config)


# Pydantic models for request/response
class NormalizeRequest(BaseModel):
    """Request model for normalizing one expression"""

    expr: str
    world: str = "flat"  # Builtin name, loaded world name or file path
    dim: Optional[int] = None


class NormalizeResponse(BaseModel):
    world: str
    expr: str
    normal_form: str


class CheckResponse(BaseModel):
    """Reports of one suite, or of the whole catalog for 'all'"""

    passed: bool
    reports: List[SuiteReport]


class SuiteCatalogResponse(BaseModel):
    suites: List[Dict[str, Any]]
    worlds: Dict[str, Any]


class NewSessionRequest(BaseModel):
    """Request model for creating a new evaluation session"""

    world: str = "flat"
    dim: Optional[int] = None
    old_session_id: Optional[str] = None


class NewSessionResponse(BaseModel):
    session_id: str
    world: str


class EvalRequest(BaseModel):
    """One REPL line; ``name = expr`` binds"""

    input: str
    session_id: Optional[str] = None


class EvalResponse(BaseModel):
    result: str
    session_id: str
    bindings: List[str]


def _fail(e: Exception) -> HTTPException:
    if isinstance(e, NcwError):
        return HTTPException(status_code=400, detail=str(e))
    logger.exception("unexpected error")
    return HTTPException(status_code=500, detail=str(e))


# API Endpoints


@app.post("/api/normalize", response_model=NormalizeResponse)
async def normalize_expression(request: NormalizeRequest):
    """Normal form of an expression in a world"""
    try:
        world = workbench.world(request.world, request.dim)
        result = workbench.normalize(request.expr, world)
        return NormalizeResponse(
            world=world.name, expr=request.expr, normal_form=result
        )
    except Exception as e:
        raise _fail(e)


@app.post("/api/check", response_model=CheckResponse)
async def run_check(spec: SuiteSpec):
    """Run a suite by name, or every suite for 'all'"""
    try:
        if spec.name == "all":
            reports = workbench.run_all(spec)
        else:
            reports = [workbench.run_suite(spec)]
        return CheckResponse(
            passed=all(report.passed for report in reports), reports=reports
        )
    except Exception as e:
        raise _fail(e)


@app.get("/api/suites", response_model=SuiteCatalogResponse)
async def get_suites():
    """Suite catalog and available worlds"""
    try:
        return SuiteCatalogResponse(
            suites=workbench.catalog.get_suite_definitions(),
            worlds=workbench.get_world_analytics(),
        )
    except Exception as e:
        raise _fail(e)


@app.post("/api/session", response_model=NewSessionResponse)
async def create_new_session(request: NewSessionRequest):
    """Create a new evaluation session and optionally clear the old one"""
    try:
        if request.old_session_id:
            workbench.session_manager.clear_session(request.old_session_id)
        world = workbench.world(request.world, request.dim)
        session_id = workbench.create_session(world)
        return NewSessionResponse(session_id=session_id, world=world.name)
    except Exception as e:
        raise _fail(e)


@app.post("/api/eval", response_model=EvalResponse)
async def evaluate_input(request: EvalRequest):
    """Evaluate one line in a session, creating one if needed"""
    try:
        session_id = request.session_id
        if not session_id:
            session_id = workbench.create_session()
        result = workbench.evaluate(session_id, request.input)
        session = workbench.session_manager.get_session(session_id)
        return EvalResponse(
            result=result, session_id=session_id, bindings=sorted(session.bindings)
        )
    except Exception as e:
        raise _fail(e)


@app.on_event("startup")
async def startup_event():
    """Load world files on startup"""
    loaded, failed = workbench.add_world_folder(config.world_dir())
    logger.info("loaded %d worlds from %s", loaded, config.world_dir())
    if failed:
        logger.warning("could not load: %s", ", ".join(failed))
