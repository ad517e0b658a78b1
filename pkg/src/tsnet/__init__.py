"""Digital (t, s)-sequences, their net and admissibility checkers, and exact
discrepancy lower-bound witnesses."""

from tsnet.badic import (
    DigitVector,
    Point,
    PreconditionError,
    digital_add,
    digital_negate,
    digital_sub,
    int_digital_add,
    truncate,
    valuation_fraction,
    valuation_int,
)
from tsnet.discrepancy import (
    Box,
    BudgetExceeded,
    indicator,
    local_discrepancy,
    star_discrepancy_exact,
    star_discrepancy_lower_witness,
)
from tsnet.generators import (
    GeneratorSystem,
    PointSet,
    block,
    build_niederreiter,
    digital_point,
    lift_with_index,
    vdc_coordinate,
)
from tsnet.gfpoly import PrimeFieldPoly, is_irreducible, laurent_coeffs, parse_poly
from tsnet.verify import (
    is_admissible_net,
    is_admissible_sequence_prefix,
    is_net,
    is_sequence_prefix,
    lemma2_admissibility_level,
)
from tsnet.witness import (
    Theorem2Witness,
    derive_params,
    gamma_digits,
    lemma1_bound,
    theorem1_bound,
    theorem1_shift,
    theorem3_params,
    verify_theorem1,
    verify_theorem2_for_Q,
)

__version__ = "0.1.0"
