"""Simultaneous power nonresidues modulo a prime.

Residue and index arithmetic, difference-avoiding selections, the
divisor-ratio reduction of nonresidues, well-spaced divisor statistics,
and exhaustive scans that check each ingredient numerically.
"""

from .errors import (
    InternalError,
    InvalidArgument,
    NonresidueError,
    PreconditionViolation,
    TooFewDivisors,
)
from .modarith import (
    FactoredInteger,
    ModulusContext,
    ResidueVector,
    factorize,
    find_primitive_root,
    index_mod_q,
    is_prime,
    mod_pow,
    power_residue_test,
    residue_vector,
)
from .selection import (
    ForbiddenVector,
    SelectionResult,
    required_length,
    select_avoiding_difference,
    select_avoiding_difference_mod,
    select_pair_avoiding_forbidden,
)
from .reduction import ReductionStep, reduce_nonresidue, reduction_chain
from .divisors import (
    WellSpacedSubset,
    enumerate_divisors,
    neighbor_pair_count,
    sharpness_probe,
    spacing_density_experiment,
    well_spaced_subset,
)
from .scan import (
    burgess_rhs,
    character_partial_sum,
    count_simultaneous_nonresidues,
    least_primitive_root,
    least_q_nonresidue,
    least_simultaneous_nonresidue,
    theorem_parameters,
)

__version__ = "0.1.0"
