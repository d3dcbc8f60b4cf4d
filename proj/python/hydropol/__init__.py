from ._hydropol import (
    Illumination,
    Model,
    Solution,
    ToyRates,
    ToySolution,
    __version__,
    clebsch_gordan,
    einstein_a,
    planck,
    radial_dipole,
    reduced_rotation,
    toy_closed_form,
    toy_rates_from,
    toy_solve,
    two_term_factor,
    wigner3j,
    wigner6j,
)

__all__ = [
    "Illumination", "Model", "Solution", "ToyRates", "ToySolution", "__version__",
    "clebsch_gordan", "einstein_a", "planck", "radial_dipole", "reduced_rotation",
    "toy_closed_form", "toy_rates_from", "toy_solve", "two_term_factor",
    "wigner3j", "wigner6j",
]
