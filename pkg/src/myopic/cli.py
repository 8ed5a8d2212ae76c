"""Command-line entry point: ``myopic {lp,verify,game,dicut,equiv}``.

Exit codes: 0 success, 1 verification or solver failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .adversary.certificate import read_certificate
from .adversary.conditions import Variant
from .adversary.games import PairedAdversary, adversary_play, six_cycle_game
from .core import brute_force_max, cut_function, read_edge_list
from .engine.algorithms import (
    DoubleGreedyPolicy,
    RandomCutPolicy,
    RandomizedDoubleGreedyPolicy,
    compare_doubling_double_greedy,
    run_double_greedy_det,
    run_double_greedy_rand,
    run_doubling_dicut,
    run_random_cut,
)
from .engine.policies import (
    AcceptAllPolicy,
    OldestBaseGreedyPolicy,
    RandomPolicy,
    RejectAllPolicy,
    ThresholdPolicy,
    make_zoo,
)
from .exceptions import DomainError, InvalidCertificate, MyopicError
from .generators import random_digraph, random_order
from .lp.model import LPConfig, build_lp, solution_to_function, solve_lp
from .lp.textio import write_lp

logger = logging.getLogger("myopic")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_BRUTE_FORCE = 20
DEFAULT_ZOO = 210


class UsageError(Exception):
    pass


def _setup_logging():
    level = os.environ.get("MYOPIC_LOG", "WARNING").upper()
    if level.isdigit():
        level = int(level)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def make_policy(name: str, seed: int = 0):
    """``double-greedy``, ``randomized-double-greedy``, ``random-cut``, ``accept-all``,
    ``reject-all``, ``oldest-base-greedy``, ``threshold:<theta>``, ``random[:<seed>]``."""
    head, _, arg = name.partition(":")
    simple = {
        "double-greedy": DoubleGreedyPolicy,
        "accept-all": AcceptAllPolicy,
        "reject-all": RejectAllPolicy,
        "oldest-base-greedy": OldestBaseGreedyPolicy,
    }
    try:
        if head in simple and not arg:
            return simple[head]()
        if head == "randomized-double-greedy":
            return RandomizedDoubleGreedyPolicy(int(arg) if arg else seed)
        if head == "random-cut":
            return RandomCutPolicy(int(arg) if arg else seed)
        if head == "threshold":
            return ThresholdPolicy(float(arg) if arg else 0.0)
        if head == "random":
            return RandomPolicy(int(arg) if arg else seed)
    except ValueError as exc:
        raise UsageError(f"bad policy argument in {name!r}") from exc
    raise UsageError(f"unknown policy {name!r}")


def _fmt(x: float) -> str:
    return f"{x:.4f}"


# --- lp ----------------------------------------------------------------------


def cmd_lp(args) -> int:
    cfg = LPConfig(args.variant, args.n, args.k)
    model = build_lp(cfg)
    if args.model:
        write_lp(model, args.model)
    if args.action == "export":
        counts = " ".join(f"{k}={v}" for k, v in sorted(model.counts().items()))
        print(f"variables={model.num_vars} rows={len(model.rows)} {counts}")
        return EXIT_OK
    sol = solve_lp(model, args.method)
    logger.info("solved in %.2fs after %d pivots", sol.seconds, sol.iterations)
    if sol.status != "optimal":
        print(f"status={sol.status}")
        return EXIT_FAIL
    try:
        cert = solution_to_function(sol, cfg)
    except InvalidCertificate as exc:
        print(f"status=invalid-certificate {exc}")
        return EXIT_FAIL
    if args.cert:
        cert.to_csv(args.cert)
    print(f"c={_fmt(cert.c)} bound={_fmt(cert.bound)}")
    return EXIT_OK


# --- verify ------------------------------------------------------------------


def cmd_verify(args) -> int:
    cert = read_certificate(args.cert, args.variant).verify(args.tol)
    report = cert.report
    ok = report.ok and cert.submodularity.ok
    line = f"variant={cert.variant.value} c={_fmt(cert.c)} bound={_fmt(cert.bound)} {report.summary()}"
    print(f"{line} result={'pass' if ok else 'fail'}")
    if not ok:
        failure = report.first_failure()
        if failure is not None:
            print(f"first failure: {failure[0]} witness={failure[1].witness}")
        return EXIT_FAIL
    return EXIT_OK


# --- game --------------------------------------------------------------------


def _zoo(args, model):
    return make_zoo(args.zoo_size, args.seed, model)


def cmd_game(args) -> int:
    model = int(args.qtype)
    if args.six_cycle:
        play = lambda p: six_cycle_game(p, model, args.template)  # noqa: E731
        bound = 2.0 / 3.0
    else:
        if not args.cert:
            raise UsageError("game needs --cert or --six-cycle")
        cert = read_certificate(args.cert, args.variant)
        adv_proto = PairedAdversary(cert)  # verifies before any game
        bound = adv_proto.cert.bound

        def play(p):
            adv = PairedAdversary(adv_proto.cert, verify=False)
            return adversary_play(adv, p, args.template, model)

    if args.policy == "zoo":
        policies = _zoo(args, model)
        with ThreadPoolExecutor(max_workers=max(args.jobs, 1)) as pool:
            reports = list(pool.map(play, policies))
        worst = max(reports, key=lambda r: r.ratio)
        forfeits = sum(r.forfeited for r in reports)
        ok = worst.ratio <= bound + 1e-6
        print(
            f"policies={len(reports)} worst_ratio={_fmt(worst.ratio)} bound={_fmt(bound)} "
            f"forfeits={forfeits} worst_policy={policies[reports.index(worst)].name} "
            f"result={'pass' if ok else 'fail'}"
        )
        return EXIT_OK if ok else EXIT_FAIL
    report = play(make_policy(args.policy, args.seed))
    print(report.summary())
    if args.verbose:
        sys.stdout.write(report.transcript.to_text())
    return EXIT_OK


# --- dicut / equiv -----------------------------------------------------------


def _order(text, n, seed):
    if text:
        try:
            order = [int(t) - 1 for t in text.replace(",", " ").split()]
        except ValueError as exc:
            raise UsageError(f"bad order {text!r}") from exc
        if sorted(order) != list(range(n)):
            raise UsageError("order must list every vertex exactly once")
        return order
    if seed is not None:
        return random_order(n, seed)
    return list(range(n))


def cmd_dicut(args) -> int:
    g = read_edge_list(args.graph)
    order = _order(args.order, g.n, args.seed if args.shuffle else None)
    if args.algorithm == "doubling":
        t = run_doubling_dicut(g, order)
    else:
        f = cut_function(g)
        if args.algorithm == "double-greedy":
            t = run_double_greedy_det(f, order)
        elif args.algorithm == "randomized-double-greedy":
            t = run_double_greedy_rand(f, order, args.seed)
        else:
            t = run_random_cut(f, order, args.seed)
    line = f"algorithm={args.algorithm} value={_fmt(t.value)}"
    if g.n <= MAX_BRUTE_FORCE:
        _, opt = brute_force_max(cut_function(g))
        ratio = t.value / opt if opt > 0 else 1.0
        line += f" opt={_fmt(opt)} ratio={_fmt(ratio)}"
    print(line)
    if args.verbose:
        sys.stdout.write(t.to_text())
    return EXIT_OK


def cmd_equiv(args) -> int:
    if args.graph:
        g = read_edge_list(args.graph)
        cases = [(g, _order(args.order, g.n, args.seed if args.shuffle else None))]
    elif args.random:
        rng = np.random.default_rng(args.seed)
        cases = []
        for _ in range(args.random):
            n = int(rng.integers(1, args.max_n + 1))
            cases.append((random_digraph(n, rng, float(rng.random())), random_order(n, rng)))
    else:
        raise UsageError("equiv needs --graph or --random COUNT")
    agree = 0
    first = None
    for g, order in cases:
        rep = compare_doubling_double_greedy(g, order)
        if rep.agree:
            agree += 1
        elif first is None:
            first = rep.divergences[0] if rep.divergences else {"final_sets": (rep.X_doubling, rep.X_greedy)}
    print(f"agreement={agree}/{len(cases)}")
    if first is not None:
        print(f"first divergence: {first}")
        return EXIT_FAIL
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="myopic", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1)

    variants = [v.value for v in Variant]
    lp = sub.add_parser("lp", help="build and solve an adversarial LP")
    lp.add_argument("action", choices=["solve", "export"])
    lp.add_argument("--variant", choices=variants, default="fixed-q2")
    lp.add_argument("--n", type=int, default=8)
    lp.add_argument("--k", type=int, default=4)
    lp.add_argument("--cert", help="write the certificate CSV here")
    lp.add_argument("--model", help="write the LP text model here")
    lp.add_argument("--method", choices=["dual", "primal"], default="dual")
    common(lp)
    lp.set_defaults(func=cmd_lp)

    ve = sub.add_parser("verify", help="check a certificate's conditions")
    ve.add_argument("--cert", required=True)
    ve.add_argument("--variant", choices=variants, help="override the header's variant")
    ve.add_argument("--tol", type=float, default=1e-6)
    common(ve)
    ve.set_defaults(func=cmd_verify)

    ga = sub.add_parser("game", help="play a policy (or the zoo) against an adversary")
    ga.add_argument("--cert")
    ga.add_argument("--six-cycle", action="store_true", help="use the 6-cycle adversary")
    ga.add_argument("--variant", choices=variants)
    ga.add_argument("--policy", default="double-greedy", help="policy name or 'zoo'")
    ga.add_argument("--template", choices=["online", "fixed", "adaptive"], default="fixed")
    ga.add_argument("--qtype", choices=["1", "2", "3"], default="2")
    ga.add_argument("--zoo-size", type=int, default=DEFAULT_ZOO)
    ga.add_argument("--verbose", "-v", action="store_true")
    common(ga)
    ga.set_defaults(func=cmd_game)

    di = sub.add_parser("dicut", help="run a Max-Di-Cut algorithm on an edge list")
    di.add_argument("--graph", required=True)
    di.add_argument(
        "--algorithm",
        choices=["doubling", "double-greedy", "randomized-double-greedy", "random-cut"],
        default="doubling",
    )
    di.add_argument("--order", help="1-based vertex order, e.g. '3 1 2'")
    di.add_argument("--shuffle", action="store_true", help="random order from --seed")
    di.add_argument("--verbose", "-v", action="store_true")
    common(di)
    di.set_defaults(func=cmd_dicut)

    eq = sub.add_parser("equiv", help="compare doubling with double greedy")
    eq.add_argument("--graph")
    eq.add_argument("--random", type=int, metavar="COUNT")
    eq.add_argument("--max-n", type=int, default=10)
    eq.add_argument("--order")
    eq.add_argument("--shuffle", action="store_true")
    common(eq)
    eq.set_defaults(func=cmd_equiv)
    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidCertificate as exc:
        print(f"invalid certificate: {exc}")
        return EXIT_FAIL
    except MyopicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
