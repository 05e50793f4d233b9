"""Quantized system identification and model-predictive control.

The package covers the full experiment pipeline: excitation and snapshot
generation (`datagen`), dithered uniform quantization of the recorded
signals (`quantizer`), least-squares identification with resolution-bias
and finite-data error analysis (`sysid`), receding-horizon control on the
identified model (`mpc`), and ultimate-bound certificates plus scaling
fits (`analysis`).  `cli` wires these into reproducible batch commands.
"""

from . import analysis, datagen, mpc, numerics, quantizer, sysid, systems

__all__ = [
    "analysis",
    "datagen",
    "mpc",
    "numerics",
    "quantizer",
    "sysid",
    "systems",
]

__version__ = "0.1.0"
