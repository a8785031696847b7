"""FER curve plotting from simulation CSV output.

Reads one or more sweep CSVs (the eleven-column schema the simulator
writes), draws a semilog-y figure, and reports exactly which points were
plotted so callers can check the figure against the data.  Points whose
frame_errors column is zero carry no FER information; they are set aside
and marked on the figure as censored rather than plotted at zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CSV_HEADER = (
    "ebno_db,frames,frame_errors,bit_errors,fer,ber,avg_iterations,"
    "sgbf_invocations,sgbf_rescues,undetected_errors,wall_seconds"
)

_N_FIELDS = len(CSV_HEADER.split(","))

MARKERS = ("o", "s", "^", "d", "v", "*")


class PlotDataError(Exception):
    """A CSV file could not be used as plot input."""


@dataclass(frozen=True)
class Point:
    """One plottable sweep point, keeping the file's own text for both
    coordinates so dumps reproduce the CSV verbatim."""

    ebno: float
    fer: float
    ebno_text: str
    fer_text: str


@dataclass(frozen=True)
class Series:
    label: str
    points: tuple[Point, ...]
    censored: tuple[float, ...]


@dataclass(frozen=True)
class PlotSpec:
    """Everything render() needs: input files, one label per file, and
    where the figure goes."""

    csv_paths: tuple[str, ...]
    labels: tuple[str, ...]
    out_path: str
    y_limits: tuple[float, float] | None = None
    markers: tuple[str, ...] = MARKERS

    def __post_init__(self):
        if len(self.csv_paths) == 0:
            raise ValueError("at least one csv path is required")
        if len(self.labels) != len(self.csv_paths):
            raise ValueError(
                f"got {len(self.labels)} labels for {len(self.csv_paths)} csv paths"
            )


@dataclass(frozen=True)
class RenderReport:
    """What actually ended up in the figure."""

    series: tuple[Series, ...]
    out_path: str
    y_limits: tuple[float, float] | None = None


def load_series(path, label):
    """Parse one sweep CSV into a Series.

    Raises PlotDataError naming the file and 1-based row for anything
    malformed: wrong header, wrong field count, or a field that does not
    parse as a number.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    if not lines:
        raise PlotDataError(f"{path}: file is empty")
    if lines[0].strip() != CSV_HEADER:
        raise PlotDataError(f"{path}: row 1 is not the expected header")

    points = []
    censored = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != _N_FIELDS:
            raise PlotDataError(
                f"{path}: row {i} has {len(fields)} fields, expected {_N_FIELDS}"
            )
        try:
            ebno = float(fields[0])
            frame_errors = int(fields[2])
            fer = float(fields[4])
        except ValueError as exc:
            raise PlotDataError(f"{path}: row {i}: {exc}") from exc
        if frame_errors == 0:
            censored.append(ebno)
        else:
            points.append(Point(ebno, fer, fields[0], fields[4]))

    if not points and not censored:
        raise PlotDataError(f"{path}: no data rows")
    return Series(label=label, points=tuple(points), censored=tuple(censored))


def auto_label(csv_path):
    """Derive a legend label from the CSV's JSON sidecar if one exists,
    otherwise fall back to the file name stem."""
    csv_path = Path(csv_path)
    sidecar = csv_path.with_name(csv_path.name + ".json")
    try:
        meta = json.loads(sidecar.read_text())
        cfg = meta["config"]
        n, k, t = cfg["n"], cfg["k"], cfg["sgbf_T"]
    except (OSError, ValueError, KeyError, TypeError):
        return csv_path.stem
    flips = f"T={t}" if t else "no flips"
    return f"FDPC({n},{k}), {flips}"


def dump_lines(series_list):
    """Flatten the plotted points to text, one `ebno,fer` line per point
    with the CSV's original field text, under a `# label` heading per
    series."""
    lines = []
    for series in series_list:
        lines.append(f"# {series.label}")
        lines.extend(f"{p.ebno_text},{p.fer_text}" for p in series.points)
    return lines


def render(spec):
    """Draw the figure described by spec and return a RenderReport of the
    exact points plotted."""
    series_list = tuple(
        load_series(path, label)
        for path, label in zip(spec.csv_paths, spec.labels)
    )

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    try:
        for idx, series in enumerate(series_list):
            marker = spec.markers[idx % len(spec.markers)]
            ax.semilogy(
                [p.ebno for p in series.points],
                [p.fer for p in series.points],
                marker=marker,
                label=series.label,
            )

        censored_x = [x for s in series_list for x in s.censored]
        if censored_x:
            floor = min(
                (p.fer for s in series_list for p in s.points if p.fer > 0),
                default=1e-6,
            )
            ax.semilogy(
                censored_x,
                [floor * 0.5] * len(censored_x),
                linestyle="none",
                marker="v",
                markerfacecolor="none",
                color="gray",
                label="no errors observed",
            )

        if spec.y_limits is not None:
            ax.set_ylim(*spec.y_limits)
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel("FER")
        ax.grid(True, which="both", alpha=0.35)
        ax.legend()
        fig.savefig(spec.out_path, dpi=150, bbox_inches="tight")
    finally:
        plt.close(fig)

    return RenderReport(series=series_list, out_path=spec.out_path,
                        y_limits=spec.y_limits)
