"""FastAPI report service for the fusion-ring catalog."""

import json
import logging
import os
from contextlib import asynccontextmanager
from typing import AsyncGenerator, Optional

from dotenv import load_dotenv
load_dotenv()

from fastapi import FastAPI, HTTPException, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from pydantic import BaseModel

from src import config
from src.algebra.errors import FusionInputError, FusionKitError
from src.algebra.groups import builtin_group
from src.catalog.models import CatalogEntry
from src.catalog.registry import Catalog
from src.pipeline import commands
from src.pipeline.graph import create_audit_graph, stream_audit

logger = logging.getLogger(__name__)

# Global catalog and audit graph
catalog: Optional[Catalog] = None
audit_graph = None


class InvokeRequest(BaseModel):
    """Request model for the invocation and report endpoints."""
    input: dict


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Build the catalog and the audit graph on startup."""
    global catalog, audit_graph

    config.configure_logging("INFO")
    logger.info("Starting up fusionkit service...")

    try:
        catalog = Catalog(config.data_dir()).load()
        logger.info("Catalog ready: %s", catalog.get_stats())
        audit_graph = create_audit_graph()
        logger.info("Audit graph compiled")
    except FusionKitError as e:
        logger.exception("Error during startup: %s", e)
        if os.getenv("FAIL_FAST", "true").lower() == "true":
            raise

    yield

    logger.info("Shutting down fusionkit service...")


app = FastAPI(
    title="fusionkit",
    description="Fusion rings, modular data and Longo-Rehren index identities as a report service",
    version="1.0.0",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _require_catalog() -> Catalog:
    if catalog is None:
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            detail="Catalog not initialized",
        )
    return catalog


def _tolerance(payload: dict) -> float:
    value = payload.get("tolerance", config.default_tolerance())
    try:
        tolerance = float(value)
    except (TypeError, ValueError):
        tolerance = -1.0
    if tolerance <= 0:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid tolerance: {value!r}")
    return tolerance


def _interval_count(payload: dict) -> int:
    value = payload.get("n", commands.DEFAULT_INTERVALS)
    try:
        if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
            raise ValueError(value)
        return int(value)
    except (TypeError, ValueError):
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid interval count: {value!r}")


def _entry(payload: dict) -> CatalogEntry:
    name = payload.get("entry")
    if not name:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail="No entry provided in request input")
    try:
        return _require_catalog().get(name)
    except FusionInputError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


@app.get("/ping")
async def ping():
    """Health check endpoint."""
    return {
        "status": "ok",
        "catalog_ready": catalog is not None,
        "entries": len(catalog.names()) if catalog is not None else 0,
    }


@app.get("/catalog")
async def list_catalog():
    """List every catalog entry."""
    return _require_catalog().list_entries()


async def event_stream(entry: CatalogEntry, tolerance: float) -> AsyncGenerator[str, None]:
    """
    Stream audit events for one entry.

    Yields:
        JSON-formatted event lines
    """
    logger.info("Auditing %s", entry.name)
    try:
        async for event in stream_audit(entry, tolerance, audit_graph):
            yield json.dumps(event) + "\n"
    except FusionKitError as e:
        logger.exception("Error in audit stream: %s", e)
        yield json.dumps({"type": "error", "content": f"Error auditing {entry.name}: {e}"}) + "\n"


@app.post("/invocations")
async def invocations(request: InvokeRequest):
    """
    Audit a catalog entry.

    Args:
        request: {"input": {"entry": <name>, "tolerance": <float, optional>}}

    Returns:
        StreamingResponse with newline-delimited JSON events
    """
    entry = _entry(request.input)
    tolerance = _tolerance(request.input)
    if audit_graph is None:
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            detail="Audit graph not initialized",
        )
    return StreamingResponse(event_stream(entry, tolerance), media_type="application/x-ndjson")


@app.post("/reports/{command}")
async def report(command: str, request: InvokeRequest):
    """
    Run a single command and return its report.

    Entry commands take {"entry", "tolerance"}; "multi" also takes "n";
    "dg" takes {"group"} with a built-in group name.
    """
    payload = request.input
    tolerance = _tolerance(payload)
    try:
        if command == "dg":
            group_name = payload.get("group")
            if not group_name:
                raise FusionInputError("No group provided in request input")
            result = commands.dg_report(builtin_group(group_name), group_name, tolerance)
        elif command == "multi":
            result = commands.multi_report(_entry(payload), tolerance, _interval_count(payload))
        elif command in commands.ENTRY_COMMANDS:
            result = commands.ENTRY_COMMANDS[command](_entry(payload), tolerance)
        else:
            raise HTTPException(
                status_code=status.HTTP_404_NOT_FOUND,
                detail=f"Unknown command '{command}'. Available: {sorted(list(commands.ENTRY_COMMANDS) + ['dg'])}",
            )
    except FusionInputError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    return result.model_dump()


if __name__ == "__main__":
    import uvicorn

    port = int(os.getenv("PORT", "8080"))

    uvicorn.run(
        "src.api.main:app",
        host="0.0.0.0",
        port=port,
        reload=False,
    )
