"""Bundled example dataset for the end-to-end ``fit`` pipeline.

``synthetic_26_series.csv`` holds 99 observations of 26 numeric series
(columns s01..s26) drawn once from a sparse linear Gaussian network;
see ``scripts/make_bundled_csv.py`` in the repository for the exact
recipe. It exists so the CSV -> standardize -> fit -> DOT pipeline can
be exercised without external downloads.
"""

from importlib.resources import as_file, files

__all__ = ["bundled_series_path", "load_bundled_series"]


def bundled_series_path():
    """Return a filesystem path to the bundled CSV."""
    resource = files(__package__).joinpath("synthetic_26_series.csv")
    with as_file(resource) as path:
        return path


def load_bundled_series():
    """Load the bundled CSV as ``(data matrix, column names)``."""
    from ..io import load_csv

    return load_csv(bundled_series_path())
