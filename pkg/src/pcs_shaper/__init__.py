"""Probabilistic constellation shaping for clipped DCO-OFDM links.

The package provides QAM/PAM constellations with probability shaping,
DCO-OFDM frame synthesis and PAPR statistics, analytical clipping
(Bussgang) statistics, clipped-channel capacity evaluation, and a
projected-gradient shaping optimizer with a nested-bisection projection.
"""

from .constellation import (
    Constellation,
    ConstellationKind,
    SymbolDistribution,
    average_symbol_power,
    build_constellation,
    random_distribution,
    scale_to_power,
    uniform_distribution,
)
from .ofdm import (
    FrequencyFrame,
    OfdmConfig,
    TimeFrame,
    add_cp,
    analyze,
    hermitian_load,
    papr,
    papr_db,
    remove_cp,
    synthesize,
)
from .clipping import (
    ClipStats,
    SystemParams,
    attenuation_factor,
    clip_signal,
    clip_stats,
    clipping_noise_variance,
    q_function,
    signal_variance,
)
from .capacity import (
    CapacityObjective,
    CapacityReport,
    SubchannelModel,
    capacity,
    eb_n0_db,
    mixture_pdf,
    noise_entropy,
    output_entropy,
    power_for_eb_n0,
    sndr_db,
    subchannel_model,
)
from .optimizer import (
    InfeasiblePowerError,
    OptimizerConfig,
    OptimizerTrace,
    numerical_gradient,
    optimize,
    project,
    project_reference,
    solve_lambda,
)
from .simulation import (
    CcdfCurve,
    MiEstimate,
    SweepPoint,
    capacity_sweep,
    empirical_bussgang,
    mc_mutual_information,
    papr_ccdf,
)

__version__ = "0.1.0"

__all__ = [
    "Constellation",
    "ConstellationKind",
    "SymbolDistribution",
    "build_constellation",
    "uniform_distribution",
    "random_distribution",
    "average_symbol_power",
    "scale_to_power",
    "OfdmConfig",
    "FrequencyFrame",
    "TimeFrame",
    "hermitian_load",
    "synthesize",
    "analyze",
    "add_cp",
    "remove_cp",
    "papr",
    "papr_db",
    "SystemParams",
    "ClipStats",
    "q_function",
    "signal_variance",
    "clip_signal",
    "attenuation_factor",
    "clipping_noise_variance",
    "clip_stats",
    "SubchannelModel",
    "CapacityReport",
    "CapacityObjective",
    "subchannel_model",
    "mixture_pdf",
    "noise_entropy",
    "output_entropy",
    "capacity",
    "eb_n0_db",
    "power_for_eb_n0",
    "sndr_db",
    "OptimizerConfig",
    "OptimizerTrace",
    "InfeasiblePowerError",
    "numerical_gradient",
    "solve_lambda",
    "project",
    "project_reference",
    "optimize",
    "CcdfCurve",
    "SweepPoint",
    "MiEstimate",
    "papr_ccdf",
    "empirical_bussgang",
    "mc_mutual_information",
    "capacity_sweep",
]
