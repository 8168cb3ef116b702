from prometheus_client import Counter, Histogram, generate_latest, CONTENT_TYPE_LATEST
from fastapi import FastAPI, Request, Response
from starlette.middleware.base import BaseHTTPMiddleware
import time

# HTTP metrics
REQUEST_COUNT = Counter('http_requests_total', 'Total HTTP Requests', [
                        'method', 'endpoint', 'status'])
REQUEST_LATENCY = Histogram(
    'http_request_duration_seconds', 'HTTP Request Latency', ['method', 'endpoint'])

# Solver metrics
SOLVE_COUNT = Counter('dualflux_solves_total', 'Discrete solves by scheme and outcome', [
                      'scheme', 'status'])
SOLVE_LATENCY = Histogram(
    'dualflux_solve_duration_seconds', 'Wall time of one discrete solve', ['scheme'])
STENCIL_COUNT = Counter('dualflux_stencils_total', 'Six-point stencils solved', ['closure'])


def route_label(request: Request) -> str:
    """Route template such as /api/v1/schemes/infsup/{n}, so path parameters do not multiply series"""
    route = request.scope.get("route")
    return getattr(route, "path", request.url.path)


class PrometheusMiddleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):

        start_time = time.perf_counter()

        response = await call_next(request)

        duration = time.perf_counter() - start_time
        endpoint = route_label(request)

        REQUEST_LATENCY.labels(method=request.method,
                               endpoint=endpoint).observe(duration)
        REQUEST_COUNT.labels(
            method=request.method, endpoint=endpoint, status=response.status_code).inc()

        return response


def setup_metrics(app: FastAPI):
    """
    Setup Prometheus metrics middleware and endpoint
    """
    app.add_middleware(PrometheusMiddleware)

    @app.get("/metrics", include_in_schema=False)
    def metrics():
        return Response(generate_latest(), media_type=CONTENT_TYPE_LATEST)


def metrics_text() -> str:
    """Current text exposition of every registered metric"""
    return generate_latest().decode("utf-8")
