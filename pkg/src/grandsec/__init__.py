"""GRAND as an eavesdropper attack on finite-blocklength codes.

Noise models and likelihood-ordered enumeration (:mod:`.noise`), guesswork
exponents (:mod:`.exponents`), random linear codes (:mod:`.code`), the GRAND
decoder with abandonment (:mod:`.grand`) and Monte Carlo sweeps
(:mod:`.sim`). The ``grandsec`` command wraps them (:mod:`.cli`).
"""

__version__ = "0.1.0"

from .code import LinearCode, encode, sample_rlc, syndrome  # noqa: E402
from .exponents import (  # noqa: E402
    capacity_point,
    confident_query_exponent,
    guesswork_scgf,
    min_capacity_point,
    rate_function,
    success_probability_estimate,
)
from .grand import DecodeResult, QueryTable, grand_decode, ml_decode_exhaustive  # noqa: E402
from .noise import BscNoise, MarkovNoise, NoiseEffect, ordered_noise_effects, sample_noise  # noqa: E402
from .sim import SweepConfig, run_point, run_sweep  # noqa: E402
