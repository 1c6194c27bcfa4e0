"""Dirac bound states in the generalized Woods-Saxon potential.

Closed-form Nikiforov-Uvarov spectra and spinor components under spin and
pseudospin symmetry, checked against a shooting solver of the radial
equation.
"""

from ._backend import BACKEND
from .errors import *  # noqa: F401,F403
from .nu import (
    KeyPolynomials,
    NuConstants,
    NuTemplate,
    derive_nu_constants,
    key_polynomials,
    nu_energy_residual,
    nu_wavefunction,
    nu_wavefunction_2f1,
)
from .oracle import (
    ShootingProblem,
    first_order_cross_check,
    shoot_eigenvalue,
    verify_spectrum,
)
from .potential import (
    PekerisCoefficients,
    PekerisSource,
    PotentialParams,
    centrifugal_error,
    eval_gws,
    pekeris_paper,
    pekeris_taylor,
)
from .special import hyp2f1_terminating, jacobi
from .spectra import (
    EnergySolution,
    Kind,
    QuantumNumbers,
    SymmetryCase,
    epsilon_spin,
    free_limit_energy,
    kg_energy_roots,
    nonrel_energy,
    pseudospin_energy_roots,
    spectrum_table,
    spin_energy_roots,
    swave_energy_roots,
)
from .wavefunctions import (
    SpinorState,
    lower_spinor_G,
    make_state,
    normalize_quadrature,
    normalize_series,
    upper_spinor_F,
)

__version__ = "0.1.0"
