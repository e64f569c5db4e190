"""Generalized Zeckendorf decompositions and their summand statistics."""
from .counting import (
    CountTable,
    MomentSummary,
    count_dp,
    count_dp_series,
    count_exhaustive,
    ks_distance,
    lekkerkerker_slope,
    moments,
    variance_slope,
)
from .decomposition import Decomposition, decompose, enumerate_legal, is_legal, recompose
from .fardiff import (
    TARGET_CORRELATION,
    JointCountTable,
    SignedDecomposition,
    correlation,
    fardiff_decompose,
    is_valid_fardiff,
    joint_counts,
)
from .recurrence import (
    FIBONACCI,
    RecurrenceSpec,
    SequenceTable,
    generate,
    largest_index_leq,
    parse_spec,
    validate_spec,
)
from .spectral import CharPoly, char_poly, dominant_root, growth_check

__version__ = "0.1.0"
