import numpy as np
import pytest

from myopic.core import Digraph, SetFunction, brute_force_max, cut_function, mask
from myopic.engine import (
    AcceptAllPolicy,
    DoubleGreedyPolicy,
    GameState,
    Gateway,
    History,
    Instance,
    Policy,
    Query,
    QueryModel,
    Template,
    accept_probability,
    compare_doubling_double_greedy,
    doubling_scores,
    parse_transcript,
    permitted_bases,
    play,
    query_vector,
    run_adaptive_priority,
    run_double_greedy_det,
    run_double_greedy_rand,
    run_doubling_dicut,
    run_fixed_priority,
    run_online,
    run_random_cut,
    singleton_vector,
)
from myopic.engine.queries import marginal_value
from myopic.exceptions import DomainError, QueryModelViolation
from myopic.generators import random_digraph, random_order, random_submodular


def gateway_for(f, model, decided, current):
    """Gateway after deciding ``decided`` (item, accept) pairs, presenting ``current``."""
    state = GameState(f.n)
    for item, accept in decided:
        state.apply(item, accept)
    state.current = current
    inst = Instance(f)
    return Gateway(model, state, inst.resolve, History()), state


class TestQueryModel:
    def test_coerce(self):
        assert QueryModel.coerce("qtype2") is QueryModel.QTYPE2
        assert QueryModel.coerce("Q3") is QueryModel.QTYPE3
        assert QueryModel.coerce(1) is QueryModel.QTYPE1

    def test_qtype1_allows_current_bases(self, six_cycle_f):
        gw, state = gateway_for(six_cycle_f, 1, [(0, True), (1, False)], 2)
        assert gw.rho(state.X) == marginal_value(six_cycle_f.values, 6, "f", 2, state.X)
        assert gw.rho_bar(state.Y) == marginal_value(six_cycle_f.values, 6, "fbar", 2, state.Y)
        assert gw.history.oracle_calls == 4

    def test_qtype1_rejects_older_base(self, six_cycle_f):
        gw, _ = gateway_for(six_cycle_f, 1, [(0, True), (1, True)], 2)
        with pytest.raises(QueryModelViolation) as err:
            gw.rho(mask([0]))
        assert "QTYPE1" in str(err.value)

    def test_qtype2_allows_prefixes_only(self, six_cycle_f):
        gw, _ = gateway_for(six_cycle_f, 2, [(0, True), (1, True)], 2)
        gw.rho(mask([0]))
        gw.rho(0)
        with pytest.raises(QueryModelViolation):
            gw.rho(mask([1]))
        with pytest.raises(QueryModelViolation):
            gw.rho(0, item=0)

    def test_qtype3_example(self, six_cycle_f):
        # step 3 of a game on the 6-cycle with v1 revealed: rho(v3|{v1}) = 1
        gw, _ = gateway_for(six_cycle_f, 3, [(0, True), (3, False)], 2)
        assert gw.step == 3
        assert gw.rho(mask([0])) == 1
        assert gw.rho(mask([3]), item=0) == marginal_value(six_cycle_f.values, 6, "f", 0, mask([3]))
        with pytest.raises(QueryModelViolation):
            gw.rho(mask([4]))
        with pytest.raises(QueryModelViolation):
            gw.rho(0, item=5)

    def test_unbound_token(self, six_cycle_f):
        state = GameState(6)
        assert QueryModel.QTYPE1.permits(Query("f", 0), state)
        assert not QueryModel.QTYPE1.permits(Query("f", 0, 2), state)
        assert not QueryModel.QTYPE3.permits(Query("g", 0), state)

    def test_nesting_random(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            n = int(rng.integers(2, 7))
            state = GameState(n)
            order = rng.permutation(n)
            steps = int(rng.integers(0, n))
            for u in order[:steps]:
                state.apply(int(u), bool(rng.random() < 0.5))
            state.current = int(order[steps])
            q = Query(str(rng.choice(["f", "fbar"])), int(rng.integers(1 << n)) & ~(1 << state.current))
            if rng.random() < 0.5:
                q = Query(q.side, state.X if q.side == "f" else state.Y)
            allowed = [m.permits(q, state) for m in QueryModel]
            assert allowed == sorted(allowed)  # False < True: once allowed, allowed above

    def test_permitted_bases(self):
        state = GameState(3)
        state.apply(0, True)
        state.apply(1, False)
        assert len(permitted_bases(1, state)) == 2
        assert len(permitted_bases(2, state)) == 4
        assert len(permitted_bases(3, state)) == 8
        assert all(QueryModel.QTYPE2.permits(q, state) for q in permitted_bases(2, state))

    def test_state_invariants(self):
        state = GameState(3)
        state.apply(2, True)
        with pytest.raises(DomainError):
            state.apply(2, False)
        assert state.X & state.Y == 0 and state.step == 1


class TestDoubleGreedy:
    def test_single_edge(self, single_edge):
        t = run_double_greedy_det(cut_function(single_edge), [0, 1])
        assert t.decisions == [True, False]
        assert [(s.a, s.b) for s in t.steps] == [(1, 0), (-1, 1)]
        assert t.value == 1 == brute_force_max(cut_function(single_edge))[1]

    def test_zero_function_accepts_all(self):
        t = run_double_greedy_det(SetFunction(np.zeros(16)), [3, 1, 0, 2])
        assert all(t.decisions) and t.value == 0

    def test_only_qtype1_queries(self, six_cycle_f):
        t = run_double_greedy_det(six_cycle_f)
        assert len(t.history.queries) == 12 and not t.forfeited

    def test_bad_order(self, six_cycle_f):
        with pytest.raises(DomainError):
            run_double_greedy_det(six_cycle_f, [0, 0, 1, 2, 3, 4])

    @pytest.mark.parametrize("seed", range(100))
    def test_one_third(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        f = random_submodular(n, rng)
        t = run_double_greedy_det(f, random_order(n, rng))
        assert t.value >= brute_force_max(f)[1] / 3 - 1e-12

    def test_transcript_replay_and_text(self, six_cycle_f):
        t = run_double_greedy_det(six_cycle_f, [2, 0, 1, 5, 4, 3])
        X, value = t.replay(six_cycle_f)
        assert (X, value) == (t.X, t.value)
        text = t.to_text()
        assert "# model: QTYPE1" in text and "# order: 3 1 2 6 5 4" in text
        rows = parse_transcript(text)
        assert [r[1] for r in rows] == t.order
        assert [r[2] for r in rows] == t.decisions
        assert text == run_double_greedy_det(six_cycle_f, [2, 0, 1, 5, 4, 3]).to_text()

    def test_parse_transcript_error(self):
        with pytest.raises(DomainError):
            parse_transcript("1 1 maybe 0 0\n")


class TestRandomized:
    def test_accept_probability(self):
        assert accept_probability(3, 1) == 0.75
        assert accept_probability(-1, 2) == 0.0
        assert accept_probability(0, 0) == 1.0
        assert accept_probability(-1, -1) == 1.0

    def test_deterministic_given_seed(self, six_cycle_f):
        a = run_double_greedy_rand(six_cycle_f, None, 5).to_text()
        b = run_double_greedy_rand(six_cycle_f, None, 5).to_text()
        assert a == b

    def test_half_guarantee_single_edge(self, single_edge):
        f = cut_function(single_edge)
        vals = np.array([run_double_greedy_rand(f, [0, 1], s).value for s in range(2000)])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert vals.mean() >= 0.5 * 1.0 - 3 * se

    def test_random_cut_runs(self, six_cycle_f):
        t = run_random_cut(six_cycle_f, None, 1)
        assert len(t.history.queries) == 0 and len(t.steps) == 6


class TestDoubling:
    def test_isolated_vertex(self):
        g = Digraph(2)
        assert doubling_scores(g, 0, 0, 0) == (0, 0, 0, 0)
        assert run_doubling_dicut(g).decisions == [True, True]

    def test_single_edge_scores(self, single_edge):
        t = run_doubling_dicut(single_edge, [0, 1])
        assert t.steps[0].scores == (0, 0, 1, 0)
        assert t.steps[0].accept

    def test_six_cycle_agreement(self, six_cycle):
        rep = compare_doubling_double_greedy(six_cycle)
        assert rep.agree and rep.X_doubling == rep.X_greedy

    def test_empty_graph(self):
        assert compare_doubling_double_greedy(Digraph(4)).agree

    @pytest.mark.parametrize("seed", range(100))
    def test_random_agreement(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 11))
        g = random_digraph(n, rng, rng.random())
        rep = compare_doubling_double_greedy(g, random_order(n, rng))
        assert rep.agree, rep.divergences


class _PriorityProbe(Policy):
    def __init__(self):
        self.seen = []

    def priority(self, qvec):
        self.seen.append(qvec)
        return 0.0

    def decide(self, gw):
        return True


class _ByValue(Policy):
    """Lower priority for larger singleton f-value."""

    def priority(self, qvec):
        return -qvec[0][1]

    def decide(self, gw):
        return gw.rho(gw.X) >= gw.rho_bar(gw.Y)


class TestTemplates:
    def test_six_cycle_equal_priorities(self, six_cycle_f):
        probe = _PriorityProbe()
        run_fixed_priority(probe, six_cycle_f)
        assert len(probe.seen) == 6 and len(set(probe.seen)) == 1

    def test_fixed_priority_order(self):
        f = SetFunction([0, 1, 3, 3])  # f({2}) > f({1})
        t = run_fixed_priority(_ByValue(), f)
        assert t.order == [1, 0]

    def test_adaptive_recomputes(self, six_cycle_f):
        probe = _PriorityProbe()
        run_adaptive_priority(probe, six_cycle_f, QueryModel.QTYPE2)
        assert len(probe.seen) == 6 + 5 + 4 + 3 + 2 + 1
        assert len(probe.seen[-1]) > len(probe.seen[0])

    def test_single_item(self):
        t = run_fixed_priority(AcceptAllPolicy(), SetFunction([0, 2.5]))
        assert t.order == [0] and t.value == 2.5

    def test_forfeit(self, six_cycle_f):
        class Cheater(Policy):
            def decide(self, gw):
                return gw.rho(0, item=0) > 0

        t = run_online(Cheater(), six_cycle_f)
        assert t.forfeited and "QTYPE1" in t.violation

    def test_vectors(self, six_cycle_f):
        assert singleton_vector(six_cycle_f, 0) == ((Query("f", 0), 1.0), (Query("fbar", 0), 1.0))
        state = GameState(6)
        state.apply(0, True)
        assert len(query_vector(six_cycle_f, 3, state, QueryModel.QTYPE2)) == 3  # X0, X1, Y0

    def test_play_coerces(self, six_cycle_f):
        t = play(DoubleGreedyPolicy(), Instance(six_cycle_f), "online", "q1")
        assert t.template is Template.ONLINE
