"""Tractability diagnostics for linear tensor-product problems."""

from ._tractlab import (
    Divergence,
    InvalidParameter,
    Inconclusive,
    ResourceLimit,
    SpectrumModel,
    UnivariateSpectrum,
    WeightSequence,
    __version__,
    alg_spt_check,
    alg_wt_check,
    avg_error,
    hurwitz_zeta,
    n_avg,
    n_worst,
    run_cli,
    tensor_classify,
    top_eigenvalues,
    zeta,
)

__all__ = [
    "Divergence",
    "InvalidParameter",
    "Inconclusive",
    "ResourceLimit",
    "SpectrumModel",
    "UnivariateSpectrum",
    "WeightSequence",
    "__version__",
    "alg_spt_check",
    "alg_wt_check",
    "avg_error",
    "hurwitz_zeta",
    "n_avg",
    "n_worst",
    "run_cli",
    "tensor_classify",
    "top_eigenvalues",
    "zeta",
]
