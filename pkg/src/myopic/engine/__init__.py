from .algorithms import (
    DoubleGreedyPolicy,
    EquivalenceReport,
    RandomCutPolicy,
    RandomizedDoubleGreedyPolicy,
    accept_probability,
    compare_doubling_double_greedy,
    doubling_scores,
    run_double_greedy_det,
    run_double_greedy_rand,
    run_doubling_dicut,
    run_random_cut,
)
from .game import (
    GameTranscript,
    Instance,
    Policy,
    StepRecord,
    Template,
    lowest_priority,
    parse_transcript,
    play,
    query_vector,
    run_adaptive_priority,
    run_fixed_priority,
    run_online,
    singleton_vector,
)
from .policies import (
    AcceptAllPolicy,
    OldestBaseGreedyPolicy,
    RandomPolicy,
    RejectAllPolicy,
    ThresholdPolicy,
    make_zoo,
)
from .queries import GameState, Gateway, History, Query, QueryModel, permitted_bases
