"""
Artifact writers - CSV, gnuplot-ready matrices, JSON reports and optional SVG plots
"""
import csv
import logging
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from config import CSV_PRECISION
from core.exceptions import OutputError
from core.solver import FrequencyResponse
from core.wavefield import Spectrum2D, WaveField, envelope
from models.schemas import ModalResult, RunManifest, SweepResult, TrendReport


logger = logging.getLogger(__name__)


class PlotKind(str, Enum):
    """Result kinds that can be emitted"""
    MODES = "modes"
    RESPONSE = "response"
    SPECTRUM = "spectrum"
    SWEEP = "sweep"
    FRF = "frf"


def fmt(value: float) -> str:
    """Full-precision, locale-independent number"""
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "nan"
    return format(float(value), f".{CSV_PRECISION}g")


def _open(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="")


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    """Write a CSV with '\\n' line endings"""
    try:
        with _open(path) as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OutputError(path, str(e)) from e
    return path


def write_matrix(path: Path, matrix: np.ndarray, header_lines: Sequence[str] = ()) -> Path:
    """Whitespace-delimited matrix, optional '#' header lines first"""
    try:
        with _open(path) as f:
            for line in header_lines:
                f.write(f"# {line}\n")
            for row in np.atleast_2d(matrix):
                f.write(" ".join(fmt(v) for v in row) + "\n")
    except OSError as e:
        raise OutputError(path, str(e)) from e
    return path


def write_json(path: Path, payload: str) -> Path:
    try:
        with _open(path) as f:
            f.write(payload + "\n")
    except OSError as e:
        raise OutputError(path, str(e)) from e
    return path


def write_modes(modes: List[ModalResult], output_dir: Path) -> Path:
    rows = ([str(m.mode_index), fmt(m.frequency_hz), fmt(m.modal_loss_factor)] for m in modes)
    return write_csv(output_dir / "modes.csv", ["mode_index", "frequency_hz", "modal_loss_factor"], rows)


def write_response(field: WaveField, output_dir: Path) -> List[Path]:
    env = envelope(field)
    envelope_path = write_csv(
        output_dir / "envelope.csv",
        ["x_m", "amplitude"],
        ([fmt(x), fmt(a)] for x, a in zip(field.x_grid, env))
    )
    field_path = write_matrix(output_dir / "field.dat", field.w)
    return [envelope_path, field_path]


def write_spectrum(spectrum: Spectrum2D, output_dir: Path) -> Path:
    headers = [
        "freqs_hz " + " ".join(fmt(f) for f in spectrum.freqs),
        "wavenumbers_rad_per_m " + " ".join(fmt(k) for k in spectrum.wavenumbers),
    ]
    return write_matrix(output_dir / "spectrum.dat", spectrum.magnitude, headers)


def write_sweep(result: SweepResult, output_dir: Path) -> List[Path]:
    rows = []
    for i, a in enumerate(result.axis1.values):
        for j, b in enumerate(result.axis2.values):
            rows.append([fmt(a), fmt(b), fmt(result.cf[i][j]), result.status(i, j)])
    csv_path = write_csv(
        output_dir / "cf_sweep.csv",
        [result.axis1.name.value, result.axis2.name.value, "cf", "status"],
        rows
    )
    matrix = np.array([[np.nan if v is None else v for v in row] for row in result.cf], dtype=float)
    headers = [
        f"rows {result.axis1.name.value}: " + " ".join(fmt(v) for v in result.axis1.values),
        f"columns {result.axis2.name.value}: " + " ".join(fmt(v) for v in result.axis2.values),
    ]
    matrix_path = write_matrix(output_dir / "cf_matrix.dat", matrix, headers)
    return [csv_path, matrix_path]


def write_frf(frf: FrequencyResponse, output_dir: Path) -> Path:
    header = ["frequency_hz"] + [f"x_{fmt(x)}" for x in frf.stations] + ["mean"]
    rows = (
        [fmt(f)] + [fmt(v) for v in values] + [fmt(mean)]
        for f, values, mean in zip(frf.frequencies_hz, frf.magnitude, frf.mean)
    )
    return write_csv(output_dir / "frf.csv", header, rows)


def write_trends(report: TrendReport, output_dir: Path) -> Path:
    return write_json(output_dir / "trends.json", report.model_dump_json(indent=2))


def write_manifest(manifest: RunManifest, output_dir: Path) -> Path:
    return write_json(output_dir / "manifest.json", manifest.model_dump_json(indent=2))


def _render_svg(result, kind: PlotKind, path: Path) -> Path:
    """Cosmetic SVG figure; acceptance never depends on it"""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "abhlab"
    fig, ax = plt.subplots(figsize=(8, 4.5))

    if kind == PlotKind.MODES:
        freqs = [m.frequency_hz for m in result]
        ax.stem([m.mode_index for m in result], freqs)
        ax.set_xlabel("Mode")
        ax.set_ylabel("Frequency (Hz)")
    elif kind == PlotKind.RESPONSE:
        env = envelope(result)
        ax.plot(result.x_grid, env / env.max())
        ax.set_xlabel("x (m)")
        ax.set_ylabel("Normalized envelope")
    elif kind == PlotKind.SPECTRUM:
        mesh = ax.pcolormesh(result.wavenumbers, result.freqs, result.magnitude, shading="nearest")
        fig.colorbar(mesh, ax=ax)
        ax.set_xlabel("Wavenumber (rad/m)")
        ax.set_ylabel("Frequency (Hz)")
    elif kind == PlotKind.SWEEP:
        matrix = np.array([[np.nan if v is None else v for v in row] for row in result.cf], dtype=float)
        mesh = ax.pcolormesh(result.axis2.values, result.axis1.values, matrix, shading="nearest", vmin=0, vmax=1)
        fig.colorbar(mesh, ax=ax, label="CF")
        ax.set_xlabel(result.axis2.name.value)
        ax.set_ylabel(result.axis1.name.value)
    elif kind == PlotKind.FRF:
        ax.semilogy(result.frequencies_hz, result.mean)
        ax.set_xlabel("Frequency (Hz)")
        ax.set_ylabel("Mean receptance (m/N)")

    try:
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise OutputError(path, str(e)) from e
    finally:
        plt.close(fig)
    return path


def emit_plot_data(
    result: Union[List[ModalResult], WaveField, Spectrum2D, SweepResult, FrequencyResponse],
    kind: PlotKind,
    output_dir: Union[str, Path],
    plot: bool = False
) -> List[Path]:
    """
    Write the data files for a result and, optionally, an SVG figure

    Args:
        result: Result object matching `kind`
        kind: Which result this is
        output_dir: Destination directory
        plot: Also render an SVG

    Returns:
        Paths written, in a fixed order
    """
    output_dir = Path(output_dir)
    kind = PlotKind(kind)

    if kind == PlotKind.MODES:
        paths = [write_modes(result, output_dir)]
    elif kind == PlotKind.RESPONSE:
        paths = write_response(result, output_dir)
    elif kind == PlotKind.SPECTRUM:
        paths = [write_spectrum(result, output_dir)]
    elif kind == PlotKind.SWEEP:
        paths = write_sweep(result, output_dir)
    else:
        paths = [write_frf(result, output_dir)]

    if plot:
        paths.append(_render_svg(result, kind, output_dir / f"{kind.value}.svg"))

    for path in paths:
        logger.info(f"Wrote {path}")
    return paths
