"""
Tropical Corals - Main Application Entry Point
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from corals import __version__
from corals.api.v1 import corals, counting, moduli, morse, quotient
from corals.core.config import settings
from corals.core.errors import CoralError, ParseError
from corals.core.logging import configure_logging

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager for startup/shutdown events."""
    configure_logging(settings)
    logger.info("Starting %s (%s)", settings.app_name, settings.api_env)
    yield
    logger.info("Shutting down %s", settings.app_name)


app = FastAPI(
    title="Tropical Corals API",
    description="Exact enumeration and counting of tropical corals and tropical Morse trees",
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

# CORS Configuration
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(CoralError)
async def coral_error_handler(request: Request, exc: CoralError):
    """Library errors become 422, or 400 when the body could not be parsed."""
    status = 400 if isinstance(exc, ParseError) else 422
    logger.info("%s %s -> %d %s", request.method, request.url.path, status, exc.__class__.__name__)
    return JSONResponse(status_code=status, content=jsonable_encoder(exc.to_report()))


# API Routers
app.include_router(
    corals.router,
    prefix="/api/v1/corals",
    tags=["Corals"]
)
app.include_router(
    moduli.router,
    prefix="/api/v1/moduli",
    tags=["Moduli"]
)
app.include_router(
    counting.router,
    prefix="/api/v1/counting",
    tags=["Counting"]
)
app.include_router(
    morse.router,
    prefix="/api/v1/morse",
    tags=["Morse Trees"]
)
app.include_router(
    quotient.router,
    prefix="/api/v1/quotient",
    tags=["Quotient"]
)


@app.get("/", include_in_schema=False)
async def root():
    """Root endpoint redirect to docs."""
    return JSONResponse(
        content={
            "message": "Tropical Corals API",
            "version": __version__,
            "docs": "/docs"
        }
    )


@app.get("/health", tags=["System"])
async def health_check():
    """Health check endpoint for monitoring."""
    return {
        "status": "healthy",
        "version": __version__,
        "environment": settings.api_env,
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("corals.main:app", host=settings.api_host, port=settings.api_port)
