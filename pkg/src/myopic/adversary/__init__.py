from .certificate import (
    Certificate,
    read_certificate,
    reference_certificate,
    write_certificate,
)
from .conditions import (
    CheckResult,
    ConditionReport,
    Variant,
    check_equalities,
    check_pair,
    check_trap,
    choice_prefixes,
    equality_pairs,
    split_prefix,
    trap_sets,
    verify_conditions,
)
from .games import (
    GameReport,
    LazyBindingSource,
    PairedAdversary,
    SixCycleAdversary,
    adversary_play,
    pad_isolated,
    six_cycle_game,
)
