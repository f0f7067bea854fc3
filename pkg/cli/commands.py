"""
Subcommand handlers
"""
import argparse
import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np

from config import DEFAULT_MODE_COUNT, OUTPUT_FOLDER
from core.assembly import build_model, dump_matrices
from core.exceptions import ConfigError
from core.section import section_sample
from core.solver import frequency_response, harmonic_response, modal_frequencies
from core.sweep import SweepRunner, parse_axis, parse_bands, summarize_trends
from core.wavefield import (
    cost_function,
    dispersion_wavenumber,
    envelope,
    envelope_from_samples,
    far_field_stations,
    near_field_cut,
    reconstruct,
    spectrum_2d,
    velocity_field,
)
from models.schemas import RunManifest, SimulationSettings, Subcommand, SweepAxis, SweepParameter
from .config_file import parse_config, parse_override
from .output_writer import PlotKind, emit_plot_data, write_manifest, write_trends


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_RECORDED_FAILURES = 2


def load_settings(args: argparse.Namespace) -> Tuple[SimulationSettings, dict]:
    """Parse the configuration named on the command line with its overrides"""
    overrides = list(args.overrides or [])
    settings = parse_config(args.config, overrides)
    applied = {}
    for text in overrides:
        section, key, value = parse_override(text)
        applied[f"{section}.{key}"] = value
    return settings, applied


def output_dir_for(args: argparse.Namespace) -> Path:
    if args.output_dir:
        return Path(args.output_dir)
    return OUTPUT_FOLDER / args.command


def finish(args: argparse.Namespace, overrides: dict, output_dir: Path, status: str) -> None:
    """Record what was run next to the artifacts"""
    manifest = RunManifest(
        config_path=str(args.config),
        subcommand=Subcommand(args.command),
        output_dir=str(output_dir),
        overrides=overrides,
        status=status
    )
    write_manifest(manifest, output_dir)


def _analysis_frequency(args: argparse.Namespace, settings: SimulationSettings) -> float:
    freq = args.freq_hz if args.freq_hz is not None else settings.analysis.freq_hz
    if freq <= 0:
        raise ConfigError("excitation frequency must be positive", key="analysis.freq_hz")
    return float(freq)


def _field(settings: SimulationSettings, freq_hz: float, dump_dir: Path = None):
    beam = settings.beam
    basis, model = build_model(beam, settings.solver.n, settings.solver.quad_order or None)
    if dump_dir is not None:
        dump_matrices(model, dump_dir)
    sol = harmonic_response(model, 2.0 * np.pi * freq_hz)
    analysis = settings.analysis
    field = reconstruct(
        sol,
        basis,
        window=(analysis.x_lo, analysis.x_hi),
        nx=analysis.nx,
        periods=analysis.periods,
        nt_per_period=analysis.nt_per_period
    )
    return sol, field


def cmd_validate_config(args: argparse.Namespace) -> int:
    settings, _ = load_settings(args)
    beam = settings.beam
    sample = section_sample(0.0, beam)
    logger.info(
        f"Configuration valid: L={beam.L} m, taper {beam.taper_length:.4g} m, "
        f"VEM {beam.vem_length:.4g} m, D(0)={sample.D.real:.5g} N m^2, mu(0)={sample.mu:.5g} kg/m"
    )
    return EXIT_OK


def cmd_modes(args: argparse.Namespace) -> int:
    settings, overrides = load_settings(args)
    output_dir = output_dir_for(args)
    _, model = build_model(settings.beam, settings.solver.n, settings.solver.quad_order or None)
    if args.dump_matrices:
        dump_matrices(model, output_dir / "matrices")
    modes = modal_frequencies(model, args.count)
    for m in modes:
        logger.debug(f"Mode {m.mode_index}: {m.frequency_hz:.6g} Hz, loss {m.modal_loss_factor:.4g}")
    emit_plot_data(modes, PlotKind.MODES, output_dir, args.plot)
    finish(args, overrides, output_dir, "ok")
    return EXIT_OK


def cmd_respond(args: argparse.Namespace) -> int:
    settings, overrides = load_settings(args)
    output_dir = output_dir_for(args)
    freq = _analysis_frequency(args, settings)
    dump_dir = output_dir / "matrices" if args.dump_matrices else None
    sol, field = _field(settings, freq, dump_dir)

    cut = near_field_cut(settings.beam, field.omega, settings.analysis.near_field_decay)
    far = far_field_stations(field.x_grid, cut)
    cf = cost_function(envelope(field)[far])
    cf_velocity = cost_function(envelope_from_samples(field, velocity_field(field))[far])
    logger.info(
        f"{freq:.6g} Hz: CF={cf:.4f} from x={field.x_grid[far][0]:.4g} m "
        f"(sampled velocity {cf_velocity:.4f}), residual {sol.residual:.2e}"
    )

    emit_plot_data(field, PlotKind.RESPONSE, output_dir, args.plot)
    finish(args, overrides, output_dir, "ok")
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace) -> int:
    settings, overrides = load_settings(args)
    output_dir = output_dir_for(args)
    freq = _analysis_frequency(args, settings)
    _, field = _field(settings, freq)
    spectrum = spectrum_2d(field, settings.analysis.zero_pad)

    f_peak, k_peak = spectrum.dominant()
    sample = section_sample(0.0, settings.beam)
    k_theory = dispersion_wavenumber(2.0 * np.pi * freq, sample.D.real, sample.mu)
    logger.info(f"Dominant peak at {f_peak:.6g} Hz, k={k_peak:.4g} rad/m (uniform-section theory {k_theory:.4g})")

    emit_plot_data(spectrum, PlotKind.SPECTRUM, output_dir, args.plot)
    finish(args, overrides, output_dir, "ok")
    return EXIT_OK


def cmd_frf(args: argparse.Namespace) -> int:
    settings, overrides = load_settings(args)
    output_dir = output_dir_for(args)
    axis = parse_axis(f"frequency_hz={args.freq_range}")
    stations = [float(s) for s in args.stations.split(",") if s.strip()]
    basis, model = build_model(settings.beam, settings.solver.n, settings.solver.quad_order or None)
    frf = frequency_response(model, basis, axis.values, stations, settings.beam.F0)

    emit_plot_data(frf, PlotKind.FRF, output_dir, args.plot)
    skipped = int(np.isnan(frf.mean).sum())
    status = "ok" if skipped == 0 else f"{skipped} resonant frequencies skipped"
    finish(args, overrides, output_dir, status)
    return EXIT_OK if skipped == 0 else EXIT_RECORDED_FAILURES


def _sweep_axes(args: argparse.Namespace, settings: SimulationSettings) -> Tuple[SweepAxis, SweepAxis]:
    axis1 = parse_axis(args.axis1 or settings.sweep.axis1)
    axis2_spec = args.axis2 if args.axis2 is not None else settings.sweep.axis2
    if axis2_spec:
        axis2 = parse_axis(axis2_spec)
    else:
        # Single-axis sweep: CF versus frequency at the configured loss factor
        axis2 = SweepAxis(name=SweepParameter.ETA, values=(settings.beam.eta,))
    return axis1, axis2


def cmd_cf_sweep(args: argparse.Namespace) -> int:
    settings, overrides = load_settings(args)
    output_dir = output_dir_for(args)
    axis1, axis2 = _sweep_axes(args, settings)
    bands = parse_bands(settings.sweep.bands)

    runner = SweepRunner(args.workers)
    runner.set_progress_callback(
        lambda current, total, label: logger.info(f"[{current}/{total}] {label}")
    )
    result = runner.run(settings.beam, axis1, axis2, settings.analysis, settings.solver)

    emit_plot_data(result, PlotKind.SWEEP, output_dir, args.plot)
    write_trends(summarize_trends(result, bands), output_dir)

    status = "ok" if not result.failed else f"{len(result.failed)} grid points failed"
    logger.info(f"Sweep finished in {result.total_time_ms / 1000:.1f} s: {status}")
    finish(args, overrides, output_dir, status)
    return EXIT_OK if not result.failed else EXIT_RECORDED_FAILURES


HANDLERS = {
    Subcommand.MODES.value: cmd_modes,
    Subcommand.RESPOND.value: cmd_respond,
    Subcommand.SPECTRUM.value: cmd_spectrum,
    Subcommand.FRF.value: cmd_frf,
    Subcommand.CF_SWEEP.value: cmd_cf_sweep,
    Subcommand.VALIDATE_CONFIG.value: cmd_validate_config,
}


def handler_names() -> List[str]:
    return list(HANDLERS)
