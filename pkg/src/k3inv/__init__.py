"""Exact lattice computations for involutions of the K3 lattice and their singular period triples."""
from .errors import K3InvError
from .isometry import (
    K3,
    LatticeIsometry,
    SimpleInvolutionId,
    classification_table,
    fixed_lattice,
    fixed_locus_topology,
    involution_invariants,
    simple_involution,
)
from .lattice import (
    IntegerLattice,
    InvariantTriple,
    Sublattice,
    discriminant_invariants,
    orthogonal_complement,
    signature,
    standard_lattice,
)
from .pairs import (
    PairId,
    build_pair,
    enumerate_pairs,
    minimal_residual_singularity,
    nikulin_embedding_check,
    pair_admissible,
    smooth_pair_exists,
)
from .periods import (
    PeriodSpec,
    canonical_period_spec,
    check_equivariance,
    orbit_analysis,
    perturb_pair,
    perturb_single,
    singular_roots,
)
from .roots import AdeConfig, enumerate_roots, extract_simple_roots, singularity_configuration

__version__ = "0.1.0"
