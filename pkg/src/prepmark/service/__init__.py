"""HTTP facade and shared report bodies."""

from .app import ApiError, create_app, serve
from .config import ServiceConfig
from .views import (
    AnalyticsNotConfigured,
    analytics_students,
    correlations_body,
    followup_body,
    scatter_body,
    status_body,
    tests_body,
)

__all__ = [
    "AnalyticsNotConfigured",
    "ApiError",
    "ServiceConfig",
    "analytics_students",
    "correlations_body",
    "create_app",
    "followup_body",
    "scatter_body",
    "serve",
    "status_body",
    "tests_body",
]
