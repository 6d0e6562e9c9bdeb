"""Collective-spin cavity simulation: quantum Fisher information of the
detuning under periodic majority-vote error correction.

Three pipelines compute the same observables:

- ``exact_trajectory`` — dense evolution of the joint atom-field state,
- ``closed_form_*`` — pinned photon-number closed forms,
- ``transfer_*`` — one correction interval compiled to a 4x4 Bloch map.

``run_validation`` runs the structural-invariant battery, and
``fit_power_law`` extracts scaling exponents from sweep results.
"""

from ._core import (
    DimensionError,
    NumericError,
    Params,
    ValidationError,
    __version__,
    chi,
    closed_form_corrected,
    closed_form_qfi,
    closed_form_state,
    error_rate_empirical,
    error_rate_law,
    exact_trajectory,
    fit_power_law,
    params,
    qfi_vs_atoms,
    run_validation,
    transfer_matrix,
    transfer_qfi,
    transfer_state,
)

__all__ = [
    "DimensionError",
    "NumericError",
    "Params",
    "ValidationError",
    "__version__",
    "chi",
    "closed_form_corrected",
    "closed_form_qfi",
    "closed_form_state",
    "error_rate_empirical",
    "error_rate_law",
    "exact_trajectory",
    "fit_power_law",
    "params",
    "qfi_vs_atoms",
    "run_validation",
    "transfer_matrix",
    "transfer_qfi",
    "transfer_state",
]
