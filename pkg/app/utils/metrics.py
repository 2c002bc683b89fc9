"""Prometheus metrics for the Groebner engine and the decision procedures"""

from typing import Optional
from prometheus_client import Counter, Histogram, CollectorRegistry

from ..config import settings


class MetricsCollector:
    """Metrics collection for engine load and verdict distribution"""

    def __init__(self, registry: Optional[CollectorRegistry] = None):
        self.registry = registry or CollectorRegistry()

        # Groebner engine
        self.groebner_runs_total = Counter(
            'groebner_runs_total',
            'Strong Groebner basis computations',
            ['order'],
            registry=self.registry
        )

        self.groebner_reduction_steps_total = Counter(
            'groebner_reduction_steps_total',
            'Reduction steps spent inside the Groebner engine',
            registry=self.registry
        )

        self.groebner_basis_size = Histogram(
            'groebner_basis_size',
            'Number of elements in computed bases',
            buckets=(1, 2, 4, 8, 16, 32, 64, 128, 256),
            registry=self.registry
        )

        self.gb_cache_events_total = Counter(
            'gb_cache_events_total',
            'Presentation basis cache hits and misses',
            ['event'],
            registry=self.registry
        )

        # Decision procedures
        self.decision_verdicts_total = Counter(
            'decision_verdicts_total',
            'Verdicts returned by decision procedures',
            ['procedure', 'verdict'],
            registry=self.registry
        )

        self.decision_duration = Histogram(
            'decision_duration_seconds',
            'Decision procedure duration',
            ['procedure'],
            registry=self.registry
        )

    def record_groebner_run(self, order: str, steps: int, size: int):
        """Record one finished Groebner computation"""
        if not settings.enable_metrics:
            return
        self.groebner_runs_total.labels(order=order).inc()
        self.groebner_reduction_steps_total.inc(steps)
        self.groebner_basis_size.observe(size)

    def record_verdict(self, procedure: str, verdict: str, duration: Optional[float] = None):
        """Record a decision verdict"""
        if not settings.enable_metrics:
            return
        self.decision_verdicts_total.labels(procedure=procedure, verdict=verdict).inc()
        if duration is not None:
            self.decision_duration.labels(procedure=procedure).observe(duration)

    def record_cache_event(self, event: str):
        """Record a cache hit or miss"""
        if settings.enable_metrics:
            self.gb_cache_events_total.labels(event=event).inc()


# Global metrics collector
metrics = MetricsCollector()


def record_groebner_run(order: str, steps: int, size: int):
    """Record Groebner run metrics"""
    metrics.record_groebner_run(order, steps, size)


def record_verdict(procedure: str, verdict: str, duration: Optional[float] = None):
    """Record verdict metrics"""
    metrics.record_verdict(procedure, verdict, duration)


def record_cache_event(event: str):
    """Record cache metrics"""
    metrics.record_cache_event(event)
