"""Catalog, sampling, Siegel embedding and the batch runner behind the CLI."""

from .catalog import (
    CatalogEntry,
    CatalogError,
    NormalizationError,
    check_normalization,
    list_catalog,
    load_prepotential,
)
from .scan import EmptySampleError, ScanResult, domain_scan, sample_points
from .siegel import SIEGEL_SIGN, SiegelDomainError, SiegelPoint, literal_embedding_matrix, siegel_embed
from .suite import SUITES, ConfigError, RunConfig, run_suite, run_suites

__all__ = [
    "CatalogEntry",
    "CatalogError",
    "ConfigError",
    "EmptySampleError",
    "NormalizationError",
    "RunConfig",
    "SIEGEL_SIGN",
    "SUITES",
    "ScanResult",
    "SiegelDomainError",
    "SiegelPoint",
    "check_normalization",
    "domain_scan",
    "list_catalog",
    "load_prepotential",
    "literal_embedding_matrix",
    "run_suite",
    "run_suites",
    "sample_points",
    "siegel_embed",
]
