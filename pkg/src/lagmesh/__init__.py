"""Regularized Lagrange-Laguerre meshes for radial Schrodinger problems.

The package solves the radial equation on a Gauss-Laguerre mesh whose
basis functions are regularized by sqrt(r) or by r, computes bound-state
spectra for five evaluation schemes (one variational, four mesh), and
extracts scattering phase shifts from positive-energy pseudostates
through integral relations of the Kohn variational type.  Bundled
benchmark tables (``lagmesh.benchmarks``) and a command-line runner
(``lagmesh.cli``) reproduce the reference results.
"""

from .basis import (
    Family,
    MeshSpec,
    evaluate_basis,
    mesh_rule,
    reconstruct_wavefunction,
)
from .matelem import (
    Classification,
    HamiltonianVariant,
    Mode,
    OperatorMatrix,
    Variant2D,
    classify_singularity,
    hamiltonian_2d,
    hamiltonian_3d,
)
from .potentials import PotentialSpec, builtin
from .quadrature import QuadratureRule, generate_rule, integrate
from .scattering import (
    IndeterminatePhaseError,
    PhaseShiftResult,
    eckart_reference_delta0,
    gamma_scan,
    tan_delta,
)
from .solver import (
    BoundSpectrum,
    Pseudostate,
    pseudostates,
    relative_error,
    solve_bound_states,
)
from .specfun import CoulombPair, coulomb_wave

__version__ = "0.1.0"

__all__ = [
    "BoundSpectrum",
    "Classification",
    "CoulombPair",
    "Family",
    "HamiltonianVariant",
    "IndeterminatePhaseError",
    "MeshSpec",
    "Mode",
    "OperatorMatrix",
    "PhaseShiftResult",
    "PotentialSpec",
    "Pseudostate",
    "QuadratureRule",
    "Variant2D",
    "builtin",
    "classify_singularity",
    "coulomb_wave",
    "eckart_reference_delta0",
    "evaluate_basis",
    "gamma_scan",
    "generate_rule",
    "hamiltonian_2d",
    "hamiltonian_3d",
    "integrate",
    "mesh_rule",
    "pseudostates",
    "reconstruct_wavefunction",
    "relative_error",
    "solve_bound_states",
    "tan_delta",
]
