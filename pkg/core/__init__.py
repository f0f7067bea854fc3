"""
Simulation core: section properties, basis, assembly, solves, wavefield and sweeps
"""
from .assembly import SpectralModel, assemble, build_model, min_quadrature_order
from .basis import BasisSet
from .section import SectionSample, section_sample
from .solver import HarmonicSolution, harmonic_response, modal_frequencies
from .sweep import SweepRunner, run_sweep, summarize_trends
from .wavefield import WaveField, Spectrum2D, reconstruct, spectrum_2d, cost_function

__all__ = [
    "SpectralModel",
    "assemble",
    "build_model",
    "min_quadrature_order",
    "BasisSet",
    "SectionSample",
    "section_sample",
    "HarmonicSolution",
    "harmonic_response",
    "modal_frequencies",
    "SweepRunner",
    "run_sweep",
    "summarize_trends",
    "WaveField",
    "Spectrum2D",
    "reconstruct",
    "spectrum_2d",
    "cost_function",
]
