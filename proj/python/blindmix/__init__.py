"""Blind demixing of rank-one lifted signals.

Thin Python surface over the C++ core: measurement ensembles, spectral
initialization, Riemannian gradient-descent / trust-region solvers, the FIHT
baseline, and the evaluation metrics.
"""

from ._core import (
    MeasurementEnsemble,
    aligned_distance,
    cyclic_convolve,
    fiht_run,
    incoherence_mu,
    lifted_matrix,
    make_ground_truth,
    ofdm_modulate,
    qam16_demodulate,
    qam16_modulate,
    relative_error,
    rgd_run,
    rtr_run,
    spectral_init,
    synthesize_observation,
)

__all__ = [
    "MeasurementEnsemble",
    "aligned_distance",
    "cyclic_convolve",
    "fiht_run",
    "incoherence_mu",
    "lifted_matrix",
    "make_ground_truth",
    "ofdm_modulate",
    "qam16_demodulate",
    "qam16_modulate",
    "relative_error",
    "rgd_run",
    "rtr_run",
    "spectral_init",
    "synthesize_observation",
]
