"""SAR coastline extraction with GGD superpixels."""

from ._core import (
    ConfigError,
    EstimationFailed,
    FormatError,
    GgdParams,
    IoError,
    OneClassOnly,
    boundary_score,
    estimate_ggd,
    extract_coastline,
    gen_coast_scene,
    ggd_log_pdf,
    ggd_pdf,
    ggd_sample,
    log_cumulants,
    polygamma,
    segment,
)

__all__ = [
    "ConfigError",
    "EstimationFailed",
    "FormatError",
    "GgdParams",
    "IoError",
    "OneClassOnly",
    "boundary_score",
    "estimate_ggd",
    "extract_coastline",
    "gen_coast_scene",
    "ggd_log_pdf",
    "ggd_pdf",
    "ggd_sample",
    "log_cumulants",
    "polygamma",
    "segment",
]
