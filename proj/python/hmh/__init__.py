"""Harmonic analysis on the Heisenberg motion group."""

import os
from pathlib import Path

_data = Path(__file__).resolve().parent / "data"
if "HMH_DATA_DIR" not in os.environ and (_data / "golden_constants.json").exists():
    os.environ["HMH_DATA_DIR"] = str(_data)

from ._core import (  # noqa: E402
    ConfigError,
    QuadratureError,
    SplitMix64,
    TwistedSlice,
    default_config,
    dump,
    heat_kernel_K,
    heat_kernel_twisted,
    hermite_function,
    laguerre,
    laguerre_function,
    library_constants,
    plancherel_constant,
    special_hermite,
    twisted_convolution_constant,
    verify,
)

__all__ = [
    "ConfigError",
    "QuadratureError",
    "SplitMix64",
    "TwistedSlice",
    "default_config",
    "dump",
    "heat_kernel_K",
    "heat_kernel_twisted",
    "hermite_function",
    "laguerre",
    "laguerre_function",
    "library_constants",
    "plancherel_constant",
    "special_hermite",
    "twisted_convolution_constant",
    "verify",
]
