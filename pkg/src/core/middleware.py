"""Middleware configuration for FastAPI application"""
from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src.utils.config import config

ALLOWED_METHODS = ["GET", "HEAD", "POST"]


def cors_origins(raw: str) -> list[str]:
    """Comma-separated origins, or ["*"] for any"""
    if raw.strip() == "*":
        return ["*"]
    return [origin.strip() for origin in raw.split(",") if origin.strip()]


def setup_middleware(app: FastAPI) -> None:
    """
    Configure all middleware for the FastAPI application.

    The API is stateless and cookie-free, so credentials are only allowed for an explicit
    origin list (browsers reject credentials with a wildcard origin).

    Args:
        app: FastAPI application instance
    """
    origins = cors_origins(config.cors_origins)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins,
        allow_credentials=origins != ["*"],
        allow_methods=ALLOWED_METHODS,
        allow_headers=["Content-Type"],
    )
