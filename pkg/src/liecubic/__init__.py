"""Riemannian cubics on compact Lie groups: trivialized Hamiltonian flow,
coadjoint-orbit reduction, and the integrals of motion."""

from .algebra import (
    StructureConstants,
    ad_star,
    bracket,
    catalog,
    flat,
    inner,
    pair,
    sharp,
)
from .errors import (
    DimensionError,
    IntegrationError,
    LevelSetError,
    RepresentationError,
)
from .full_dynamics import (
    FullState,
    FullTrajectory,
    hamiltonian,
    hamiltonian_vector_field,
    initial_momenta,
    integrate_full,
    make_state,
    momentum_map,
)
from .group import (
    GroupElement,
    adjoint,
    coadjoint,
    exp_map,
    identity,
    inverse,
    multiply,
    semidirect_left_translate,
)
from .invariants import (
    InvariantReport,
    bracket_matrix,
    bracket_rank,
    classical_invariants,
    classical_invariants_from_reduced,
    classical_invariants_from_samples,
    invariant,
    invariant_field,
    invariant_gradient,
    invariant_values,
    lie_cartan_report,
    orbit_dimension,
    poisson_bracket,
)
from .reduction import (
    ReducedState,
    ReducedTrajectory,
    casimirs,
    embed_level_set,
    euler_lagrange_residual,
    integrate_reduced,
    make_reduced_state,
    project_level_set,
    project_trajectory,
    reduced_hamiltonian,
    reduced_vector_field,
)
from .verification import (
    ELState,
    ELTrajectory,
    fd_check_hamiltonian_field,
    integrate_euler_lagrange,
    reconstruct_group_path,
)

__version__ = "0.1.0"
