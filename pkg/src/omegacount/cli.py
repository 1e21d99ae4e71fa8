"""Command line front end.

Subcommands mirror the library: `build` runs one constructor, re-validates
the result, and writes the automaton file; `lift` turns a source run into a
certificate run on the coded word; `word encode`, `run check`, `explore`,
`lasso-member`, and `bench queue-bounds` cover word coding, run validation,
prefix reachability, lasso membership, and the queue cost table.  Exit code
0 means success, 1 a negative verdict from a check, 2 a usage or input
error.
"""

from __future__ import annotations

import argparse
import random
import sys

from .engine import bounded_explore, exact_prefix_reach, nba_lasso_member
from .errors import FormatError
from .fileio import dump_automaton, dump_run, load_automaton, load_run, load_word
from .machines import (BuchiAutomaton, CounterMachine, MachineError,
                       is_real_time, validate_run)
from .storage import (add_rear_bound, front_bound, queue_add_rear,
                      queue_empty, queue_front, queue_remove_front)
from .constructions import (build_h_complement, build_phi_wrapper,
                            build_realtime8, build_script_L,
                            build_theta_acceptor, compose_pipeline,
                            lift_run_phi, lift_run_pipeline,
                            lift_run_script_L, lift_run_theta, wadge_sum)


def _letters(spec: str) -> list[str]:
    return [t for t in spec.split(",") if t]


def _primes(spec: str) -> tuple[int, ...]:
    return tuple(int(t) for t in spec.split(",") if t)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _buchi(path: str) -> BuchiAutomaton:
    aut = load_automaton(_read(path))
    if not isinstance(aut, BuchiAutomaton):
        raise MachineError(f"{path}: expected a Buchi automaton")
    return aut


# re-validation before writing: rebuild the dataclasses so every structural
# check runs again, then the per-target shape claims
_SHAPE = {
    "theta-acceptor": (2, None),
    "realtime8": (8, True),
    "script-l": (1, None),
    "h-complement": (1, True),
    "phi-wrapper": (None, True),
    "pipeline": (1, True),
    "wadge-sum": (None, None),
}


def _revalidate(target: str, b: BuchiAutomaton) -> None:
    m = b.machine
    rebuilt = CounterMachine(m.k, m.alphabet, m.states, m.initial, m.transitions)
    BuchiAutomaton(machine=rebuilt, accepting=b.accepting)
    want_k, want_rt = _SHAPE[target]
    if want_k is not None and m.k != want_k:
        raise MachineError(f"{target} output has k={m.k}, expected {want_k}")
    if want_rt and not is_real_time(m):
        raise MachineError(f"{target} output is not real-time")


def _cmd_build(args) -> int:
    target = args.target
    if target == "theta-acceptor":
        if args.S is None or not args.sigma:
            raise MachineError("theta-acceptor needs --sigma and --S")
        b = build_theta_acceptor(frozenset(_letters(args.sigma)), args.S)
    elif target == "realtime8":
        s, b = build_realtime8(_buchi(args.input), S_override=args.S)
        print(f"S {s}", file=sys.stderr)
    elif target == "script-l":
        b = build_script_L(_buchi(args.input), _primes(args.primes))
    elif target == "h-complement":
        if not args.sigma or not args.primes:
            raise MachineError("h-complement needs --sigma and --primes")
        b = build_h_complement(frozenset(_letters(args.sigma)), _primes(args.primes))
    elif target == "phi-wrapper":
        if args.S is None:
            raise MachineError("phi-wrapper needs --S (the filler count)")
        b = build_phi_wrapper(_buchi(args.input), args.S)
    elif target == "pipeline":
        out = compose_pipeline(_buchi(args.input),
                               primes=_primes(args.primes) if args.primes else None,
                               skip_realtime8=args.skip_stage1)
        b = out.automaton
        for name, params, _ in out.provenance:
            print(f"stage {name} {params}", file=sys.stderr)
    else:  # wadge-sum
        if not (args.input and args.input2 and args.input3):
            raise MachineError("wadge-sum needs --input, --input2 and --input3")
        b = wadge_sum(_buchi(args.input), _buchi(args.input2), _buchi(args.input3),
                      frozenset(_letters(args.plus)), frozenset(_letters(args.minus)))
    _revalidate(target, b)
    _emit(dump_automaton(b), args.output)
    return 0


def _cmd_lift(args) -> int:
    run = load_run(_read(args.run))
    if args.stage == "theta":
        cert = lift_run_theta(_buchi(args.input), run,
                              prefix_len=args.prefix_len, s_override=args.S)
    elif args.stage == "script-l":
        cert = lift_run_script_L(_buchi(args.input), _primes(args.primes), run,
                                 prefix_len=args.prefix_len)
    elif args.stage == "phi":
        if args.S is None:
            raise MachineError("lift --stage phi needs --S (the filler count)")
        cert = lift_run_phi(_buchi(args.input), args.S, run,
                            prefix_len=args.prefix_len)
    else:  # pipeline
        out = compose_pipeline(_buchi(args.input),
                               primes=_primes(args.primes) if args.primes else None,
                               skip_realtime8=args.skip_stage1)
        cert = lift_run_pipeline(out, run, prefix_len=args.prefix_len)
    header = "".join(f"# block {b.index} {b.start} {b.end}\n" for b in cert.blocks)
    _emit(header + dump_run(cert.run), args.output)
    return 0


def _cmd_word_encode(args) -> int:
    spec = load_word(_read(args.word))
    n = args.n if args.n is not None else spec.prefix
    if n is None:
        raise MachineError("word encode needs --n or a prefix directive in the file")
    _emit(" ".join(spec.prefix_letters(n)) + "\n", args.output)
    return 0


def _cmd_run_check(args) -> int:
    b = _buchi(args.input)
    run = load_run(_read(args.run))
    if args.word:
        spec = load_word(_read(args.word))
        n = args.n if args.n is not None else spec.prefix
        if n is None:
            raise MachineError("--word needs --n or a prefix directive")
        word = spec.prefix_letters(n)
    else:
        word = [s.consumed for s in run.steps if s.consumed is not None]
    bad = validate_run(b.machine, word, run)
    if bad is None:
        visits = sum(1 for s in run.steps if s.result.state in b.accepting)
        print(f"ok {len(run.steps)} steps {visits} accepting visits")
        return 0
    print(f"violation {bad}")
    return 1


def _cmd_explore(args) -> int:
    b = _buchi(args.input)
    spec = load_word(_read(args.word))
    n = args.n if args.n is not None else spec.prefix
    if n is None:
        raise MachineError("explore needs --n or a prefix directive")
    word = spec.prefix_letters(n)
    if args.lambda_budget is not None:
        ev = bounded_explore(b, word, args.lambda_budget)
        sizes = ev.sizes()
        tag = "exhausted" if ev.exhausted else "capped"
        print(f"letters {n} final {sizes[-1]} configurations "
              f"max-visits {ev.max_visits() if sizes[-1] else '-'} {tag}")
        return 0 if sizes[-1] else 1
    r = exact_prefix_reach(b, word)
    sizes = r.sizes()
    empty = r.first_empty_position()
    print(f"letters {n} final {sizes[-1]} configurations "
          f"max-visits {r.max_visits(len(sizes) - 1) if sizes[-1] else '-'} "
          f"first-empty {'-' if empty is None else empty}"
          f"{' (capped)' if r.capped else ''}")
    return 0 if sizes[-1] else 1


def _cmd_lasso_member(args) -> int:
    b = _buchi(args.input)
    spec = load_word(_read(args.word))
    if spec.chain:
        raise MachineError("lasso-member takes a plain lasso, not a coded word")
    verdict = nba_lasso_member(b, spec.lasso)
    print("member" if verdict else "non-member")
    return 0 if verdict else 1


def _cmd_bench_queue(args) -> int:
    rng = random.Random(args.seed)
    k = args.k
    q = queue_empty(k)
    rows = []
    for _ in range(args.ops):
        m = len(q.content)
        if m and rng.random() < 0.4:
            before = q.step_count
            _, q = queue_remove_front(q)
            rows.append(("remove", m, q.step_count - before, front_bound(m, k)))
        else:
            r = rng.randrange(2, k)
            before = q.step_count
            q = queue_add_rear(q, r)
            rows.append(("add", m, q.step_count - before, add_rear_bound(m, k)))
        if q.content:
            m = len(q.content)
            before = q.step_count
            _, q = queue_front(q)
            rows.append(("front", m, q.step_count - before, front_bound(m, k)))
    print("op m cost bound slack")
    worst = 0.0
    for op, m, cost, bound in rows:
        print(f"{op} {m} {cost} {bound} {bound - cost}")
        worst = max(worst, cost / bound)
        if cost > bound:
            print(f"BOUND EXCEEDED for {op} at m={m}")
            return 1
    print(f"worst-ratio {worst:.3f}")
    return 0


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="omegacount")
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="run one constructor")
    b.add_argument("target", choices=["theta-acceptor", "realtime8", "script-l",
                                      "h-complement", "phi-wrapper", "pipeline",
                                      "wadge-sum"])
    b.add_argument("--input", help="input automaton file")
    b.add_argument("--input2", help="second automaton (wadge-sum)")
    b.add_argument("--input3", help="complement automaton (wadge-sum)")
    b.add_argument("--sigma", default="", help="comma-separated letters")
    b.add_argument("--primes", default="", help="comma-separated primes")
    b.add_argument("--S", type=int, help="numeric parameter: pad factor, "
                   "override, or filler count depending on the target")
    b.add_argument("--plus", default="", help="plus switch letters (wadge-sum)")
    b.add_argument("--minus", default="", help="minus switch letters (wadge-sum)")
    b.add_argument("--skip-stage1", action="store_true",
                   help="pipeline: feed the input to stage 2 directly")
    b.add_argument("-o", "--output")
    b.set_defaults(fn=_cmd_build)

    l = sub.add_parser("lift", help="lift a run to a coded-word certificate")
    l.add_argument("--stage", required=True,
                   choices=["theta", "script-l", "phi", "pipeline"])
    l.add_argument("--input", required=True, help="source automaton file")
    l.add_argument("--run", required=True, help="source run file")
    l.add_argument("--prefix-len", type=int)
    l.add_argument("--primes", default="")
    l.add_argument("--S", type=int)
    l.add_argument("--skip-stage1", action="store_true")
    l.add_argument("-o", "--output")
    l.set_defaults(fn=_cmd_lift)

    w = sub.add_parser("word", help="word file utilities")
    wsub = w.add_subparsers(dest="wordcmd", required=True)
    we = wsub.add_parser("encode", help="print a coded prefix of a word file")
    we.add_argument("--word", required=True)
    we.add_argument("--n", type=int)
    we.add_argument("-o", "--output")
    we.set_defaults(fn=_cmd_word_encode)

    r = sub.add_parser("run", help="run file utilities")
    rsub = r.add_subparsers(dest="runcmd", required=True)
    rc = rsub.add_parser("check", help="validate a run file against an automaton")
    rc.add_argument("--input", required=True)
    rc.add_argument("--run", required=True)
    rc.add_argument("--word")
    rc.add_argument("--n", type=int)
    rc.set_defaults(fn=_cmd_run_check)

    e = sub.add_parser("explore", help="reachability along a coded prefix")
    e.add_argument("--input", required=True)
    e.add_argument("--word", required=True)
    e.add_argument("--n", type=int)
    e.add_argument("--lambda-budget", type=int,
                   help="budgeted closure for machines with lambda moves")
    e.set_defaults(fn=_cmd_explore)

    m = sub.add_parser("lasso-member", help="exact lasso membership (k = 0)")
    m.add_argument("--input", required=True)
    m.add_argument("--word", required=True)
    m.set_defaults(fn=_cmd_lasso_member)

    bench = sub.add_parser("bench", help="cost benchmarks")
    bsub = bench.add_subparsers(dest="benchcmd", required=True)
    bq = bsub.add_parser("queue-bounds", help="queue step costs against the bounds")
    bq.add_argument("--k", type=int, default=4)
    bq.add_argument("--ops", type=int, default=30)
    bq.add_argument("--seed", type=int, required=True)
    bq.set_defaults(fn=_cmd_bench_queue)

    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, MachineError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
