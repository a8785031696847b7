"""FER curve plotting for sweep CSV output."""

__version__ = "0.1.0"

from .plots import (
    CSV_HEADER,
    MARKERS,
    PlotDataError,
    PlotSpec,
    Point,
    RenderReport,
    Series,
    auto_label,
    dump_lines,
    load_series,
    render,
)

__all__ = [
    "CSV_HEADER",
    "MARKERS",
    "PlotDataError",
    "PlotSpec",
    "Point",
    "RenderReport",
    "Series",
    "auto_label",
    "dump_lines",
    "load_series",
    "render",
    "__version__",
]
