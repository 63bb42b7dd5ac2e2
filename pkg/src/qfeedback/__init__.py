"""Fixed-length q-ary feedback codes against adversarial substitution errors."""
from .bounds import (
    RateRegionPoint,
    UnsupportedAlphabet,
    conservation_check,
    curve_construction,
    curve_translation,
    curve_volume,
    emit_rate_region,
    hq,
    min_blocklength_converse,
    translated_volume_bounds,
    volume,
    volume_bound_holds,
)
from .channel import exhaustive_verify, simulate
from .codec import FeedbackCode, build_from_strategy, build_from_table, decode, encode_step
from .solver import (
    Solver,
    SolveVerdict,
    StrategyTree,
    extract_strategy,
    is_winning,
    max_messages,
    min_blocklength,
    verify_strategy,
)
from .state import (
    PartitionQ,
    ReductionOutcome,
    State,
    check_reduction,
    dominates_componentwise,
    dominates_tailsum,
    embed,
    initial_state,
    invert_reduction,
    reduce,
    translate,
)
from .table import TableA, achievable_blocklength, build_table, column_state, table_partition, verify_table

__version__ = "0.1.0"
