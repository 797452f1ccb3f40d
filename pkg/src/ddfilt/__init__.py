"""Dephasing filter functions, optimized decoupling sequence sets, and
single-parameter feedback calibration for qubit coherence under classical
noise."""

from .coherence import (
    CoherenceResult,
    DecoherenceCurve,
    chi,
    chi_physical,
    coherence_time,
    decoherence_curve,
    monte_carlo_error,
)
from .filters import (
    FilterEvalContext,
    area_analytic,
    area_quadrature,
    filter_value,
    tau_crossover,
)
from .optimize import (
    OptimizerConfig,
    build_lodd_set,
    build_ofdd_set,
    lodd_optimize,
    minimize_area,
)
from .sequences import (
    PulseSequence,
    SequenceSet,
    absolute_pulse_times,
    from_half_parameters,
    make_cpmg,
    make_udd,
)
from .spectra import NoiseSpectrum, ambient, load_tabulated, ohmic, one_over_f, sharpness_metric

__version__ = "0.1.0"

__all__ = [
    "CoherenceResult",
    "DecoherenceCurve",
    "FilterEvalContext",
    "NoiseSpectrum",
    "OptimizerConfig",
    "PulseSequence",
    "SequenceSet",
    "__version__",
    "absolute_pulse_times",
    "ambient",
    "area_analytic",
    "area_quadrature",
    "build_lodd_set",
    "build_ofdd_set",
    "chi",
    "chi_physical",
    "coherence_time",
    "decoherence_curve",
    "filter_value",
    "from_half_parameters",
    "load_tabulated",
    "lodd_optimize",
    "make_cpmg",
    "make_udd",
    "minimize_area",
    "monte_carlo_error",
    "ohmic",
    "one_over_f",
    "sharpness_metric",
    "tau_crossover",
]
