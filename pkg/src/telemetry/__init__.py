"""Telemetry module with graceful degradation."""
from src.telemetry.tracing import (
    init_telemetry,
    get_tracer,
    traced,
    run_with_context,
    shutdown_telemetry
)

__all__ = [
    "init_telemetry",
    "get_tracer",
    "traced",
    "run_with_context",
    "shutdown_telemetry"
]
