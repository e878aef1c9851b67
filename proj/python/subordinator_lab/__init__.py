"""Subordinator first-passage simulation and limit-law verification.

Thin Python surface over the C++ core: build a model from JSON, sample first
passages, and evaluate the Beta limit law, large-deviation targets, and the
double Laplace transform identity.
"""

from ._core import (
    PassageSample,
    SlowVaryingFn,
    SublabError,
    SubordinatorSpec,
    batch_passages,
    beta_cdf,
    beta_cdf_small_t_asymptote,
    dl_empirical,
    dl_theoretical,
    ell_from_json,
    invert_laplace_gs,
    karamata_ratio,
    ks_to_beta,
    lde_target,
    levy_tail,
    phi,
    potter_check,
    run_config,
    spec_from_json,
    version,
)

__version__ = version()

__all__ = [
    "PassageSample",
    "SlowVaryingFn",
    "SublabError",
    "SubordinatorSpec",
    "batch_passages",
    "beta_cdf",
    "beta_cdf_small_t_asymptote",
    "dl_empirical",
    "dl_theoretical",
    "ell_from_json",
    "invert_laplace_gs",
    "karamata_ratio",
    "ks_to_beta",
    "lde_target",
    "levy_tail",
    "phi",
    "potter_check",
    "run_config",
    "spec_from_json",
    "version",
    "__version__",
]
