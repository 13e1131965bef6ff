"""File formats, run configuration, verification suites and the ``tomo`` command."""

from .config import DEFAULT_TOLERANCES, ComparisonReport, RunConfig
from .formats import (
    read_density_json,
    read_tomogram_csv,
    write_density_json,
    write_kernel_json,
    write_tomogram_csv,
)

__all__ = [
    "DEFAULT_TOLERANCES",
    "ComparisonReport",
    "RunConfig",
    "read_density_json",
    "read_tomogram_csv",
    "write_density_json",
    "write_kernel_json",
    "write_tomogram_csv",
]
