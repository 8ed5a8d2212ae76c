"""End-to-end acceptance checks, one test per criterion."""
import time

import numpy as np
import pytest

from myopic.adversary import (
    PairedAdversary,
    Variant,
    adversary_play,
    check_equalities,
    check_pair,
    six_cycle_game,
)
from myopic.cli import main
from myopic.core import (
    SetFunction,
    brute_force_max,
    complement_evaluate,
    cut_reconstruction_rank,
    mask,
)
from myopic.engine import (
    DoubleGreedyPolicy,
    GameState,
    Gateway,
    History,
    Instance,
    Query,
    QueryModel,
    compare_doubling_double_greedy,
    make_zoo,
    run_double_greedy_det,
    run_double_greedy_rand,
)
from myopic.exceptions import QueryModelViolation
from myopic.generators import random_digraph, random_order, random_submodular
from myopic.lp import LPConfig, solve_certificate

TARGETS = {"fixed-q2": 2.3333, "fixed-q3": 2.2222, "adaptive-q2": 2.3158}
BOUNDS = {"fixed-q2": 0.4286, "fixed-q3": 0.4500, "adaptive-q2": 0.4318}
ZOO_SIZE = 210


@pytest.fixture(scope="module")
def solved():
    out = {}
    for variant in TARGETS:
        t0 = time.perf_counter()
        cert, sol = solve_certificate(LPConfig(variant))
        out[variant] = (cert, sol, time.perf_counter() - t0)
    return out


def test_criterion_01_lp_objectives(solved, acceptance):
    parts, ok = [], True
    for variant, target in TARGETS.items():
        _, sol, secs = solved[variant]
        good = sol.status == "optimal" and abs(sol.objective - target) <= 1e-3 and secs < 60
        ok &= good
        parts.append(f"{variant}={sol.objective:.4f} ({secs:.1f}s)")
    assert acceptance(1, ok, " ".join(parts))


def test_criterion_02_printed_bounds(tmp_path, capsys, acceptance):
    parts, ok = [], True
    for variant, target in BOUNDS.items():
        code = main(["lp", "solve", "--variant", variant])
        out = capsys.readouterr().out.strip()
        printed = float(out.split("bound=")[1])
        good = code == 0 and abs(printed - target) <= 5e-4
        ok &= good
        parts.append(f"{variant}:{printed:.4f}")
    assert acceptance(2, ok, " ".join(parts))


def test_criterion_03_certificates(solved, acceptance):
    parts, ok = [], True
    for variant, (cert, _, _) in solved.items():
        t0 = time.perf_counter()
        checked = cert.verify(1e-6)
        secs = time.perf_counter() - t0
        good = checked.report.ok and checked.submodularity.ok and secs < 10
        ok &= good
        names = ",".join(checked.report.checks)
        parts.append(f"{variant}[{names}] {secs:.2f}s")
    assert acceptance(3, ok, "; ".join(parts))


def _covered(variant: Variant):
    for template in ("online", "fixed", "adaptive"):
        for model in (1, 2, 3):
            if template in variant.templates and model in variant.models:
                yield template, model


def test_criterion_04_adversary_zoo(solved, acceptance):
    parts, ok = [], True
    for variant, (cert, _, _) in solved.items():
        PairedAdversary(cert)  # verifies once
        worst = 0.0
        games = 0
        for template, model in _covered(cert.variant):
            zoo = make_zoo(ZOO_SIZE, 0, model)
            assert len(zoo) >= 200 and isinstance(zoo[0], DoubleGreedyPolicy)
            for policy in zoo:
                # InvalidCertificate (a fired consistency assertion) would propagate
                rep = adversary_play(PairedAdversary(cert, verify=False), policy, template, model)
                worst = max(worst, rep.ratio)
                games += 1
        good = worst <= cert.bound + 1e-6
        ok &= good
        parts.append(f"{variant}: worst={worst:.6f} bound={cert.bound:.6f} games={games}")
    assert acceptance(4, ok, "; ".join(parts))


def test_criterion_05_six_cycle(acceptance):
    worst = 0.0
    games = 0
    for model in (1, 2, 3):
        for template in ("online", "fixed"):
            for policy in make_zoo(ZOO_SIZE, 1, model):
                rep = six_cycle_game(policy, model, template)
                worst = max(worst, rep.alg_value)
                games += 1
    ok = worst <= 2 + 1e-12
    assert acceptance(5, ok, f"max cut={worst:g} over {games} games (opt 3)")


def test_criterion_06_doubling_equivalence(acceptance):
    rng = np.random.default_rng(2024)
    agree = 0
    steps = 0
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        g = random_digraph(n, rng, float(rng.random()))
        rep = compare_doubling_double_greedy(g, random_order(n, rng))
        agree += rep.agree
        steps += n
    ok = agree == 1000
    assert acceptance(6, ok, f"agreement={agree}/1000 graphs ({steps} steps)")


@pytest.mark.slow
def test_criterion_07_guarantees(acceptance):
    rng = np.random.default_rng(7)
    worst = np.inf
    tables = []
    for _ in range(500):
        n = int(rng.integers(1, 7))
        f = random_submodular(n, rng)
        opt = brute_force_max(f)[1]
        value = run_double_greedy_det(f, random_order(n, rng)).value
        if opt > 0:
            worst = min(worst, value / opt)
        tables.append((f, opt, value >= opt / 3 - 1e-12))
    det_ok = all(t[2] for t in tables)

    rand_ok = True
    slack = np.inf
    for idx in range(20):
        f, opt, _ = tables[idx]
        vals = np.array([run_double_greedy_rand(f, None, [idx, s]).value for s in range(10_000)])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        rand_ok &= vals.mean() >= 0.5 * opt - 3 * se
        slack = min(slack, vals.mean() - 0.5 * opt + 3 * se)
    ok = det_ok and rand_ok
    assert acceptance(7, ok, f"det worst ratio={worst:.4f} (>=1/3); randomized min margin={slack:.4f}")


def test_criterion_08_rank(three_cycle, acceptance):
    g, _ = three_cycle
    rows, rank = cut_reconstruction_rank(g)
    # rows are cuts of {1},{2},{1,2},{3},{1,3},{2,3}; the singletons and pairs balance
    signs = np.array([1, 1, -1, 1, -1, -1])
    witness = np.all(signs @ np.array(rows) == 0)
    ok = rank == 5 and len(g.edges) == 6 and witness
    assert acceptance(8, ok, f"rank={rank}/6, c1+c2+c3=c4+c5+c6 witnessed={bool(witness)}")


def _random_state(rng, n):
    state = GameState(n)
    order = [int(u) for u in rng.permutation(n)]
    steps = int(rng.integers(0, n))
    for u in order[:steps]:
        state.apply(u, bool(rng.random() < 0.5))
    state.current = order[steps]
    return state


def _gateway(f, model, state):
    return Gateway(QueryModel.coerce(model), state, Instance(f).resolve, History())


def test_criterion_09_gateway(acceptance):
    rng = np.random.default_rng(9)
    raised = probes = 0
    for _ in range(300):
        n = int(rng.integers(3, 8))
        f = random_submodular(n, rng)
        state = GameState(n)
        order = [int(u) for u in rng.permutation(n)]
        for u in order[:-1]:
            state.apply(u, True)
        state.current = order[-1]
        # QType1: marginal against an older accepted set X_j, j < i - 1
        j = int(rng.integers(0, state.step))
        old = state.xs[j]
        probes += 1
        try:
            _gateway(f, 1, state).rho(old)
        except QueryModelViolation:
            raised += 1
        # QType2: marginal of a revealed item other than the current one
        u = order[int(rng.integers(0, len(order) - 1))]
        probes += 1
        try:
            _gateway(f, 2, state).rho(0, item=u)
        except QueryModelViolation:
            raised += 1
        # the same probe is fine one level up
        _gateway(f, 3, state).rho(0, item=u)

    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        f = random_submodular(n, rng)
        state = _random_state(rng, n)
        side = "f" if rng.random() < 0.5 else "fbar"
        roll = rng.random()
        if roll < 0.4:
            q = Query(side, state.X if side == "f" else state.Y)
        elif roll < 0.8:
            q = Query(side, int(rng.integers(1 << n)) & ~(1 << state.current))
        else:
            revealed = [u for u in range(n) if (state.X | state.Y) >> u & 1]
            item = int(rng.choice(revealed)) if revealed else state.current
            q = Query(side, int(rng.integers(1 << n)) & ~(1 << item), item)
        allowed = [m.permits(q, state) for m in QueryModel]
        answers = {}
        for m, ok in zip(QueryModel, allowed):
            if ok:
                answers[m] = _gateway(f, m, state).query(q)
        if allowed != sorted(allowed) or len(set(answers.values())) > 1:
            mismatches += 1
    ok = raised == probes and mismatches == 0
    assert acceptance(9, ok, f"probes raised={raised}/{probes}; nesting mismatches={mismatches}/1000")


def test_criterion_10_anchors(acceptance):
    n = 8
    full = (1 << n) - 1
    fixed = np.zeros(1 << n)
    fixed[mask([4, 1])] = fixed[mask([4, 5])] = 1.111111
    fixed[mask([4, 5, 6, 7])] = 2.222222
    f = SetFunction(fixed)
    pair_ok = check_pair(f, "f", mask([4]), 1, 5, 1e-6).ok
    opt_ok = abs(f(mask([4, 5, 6, 7])) - 2.222222) <= 1e-6

    adaptive = np.zeros(1 << n)
    for u in range(n):
        adaptive[1 << u] = adaptive[full ^ 1 << u] = 0.5789474
    g = SetFunction(adaptive)
    single_ok = check_equalities(g, "cond1", (), (), 1e-6).ok
    cross_ok = abs(g(1) - complement_evaluate(g, 1)) <= 1e-6

    # a perturbed anchor must be rejected
    fixed[mask([4, 5])] += 1e-5
    reject_ok = not check_pair(SetFunction(fixed), "f", mask([4]), 1, 5, 1e-6).ok
    ok = pair_ok and opt_ok and single_ok and cross_ok and reject_ok
    assert acceptance(
        10, ok, f"f(5 2)=f(5 6) {pair_ok}; f(5 6 7 8) {opt_ok}; singletons {single_ok}; f(1)=fbar(1) {cross_ok}; perturbed rejected {reject_ok}"
    )
