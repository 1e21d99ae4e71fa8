"""Real-time wrapper that hides lambda moves behind a fixed filler cadence.

Every letter of the wrapped machine is preceded by exactly L filler letters;
lambda moves are re-read as filler, surplus filler idles in place.  States
carry the filler position and a pulse bit that is set exactly when the step
entered an accepting state of the wrapped machine, so accepting visit counts
transfer one to one.
"""

from __future__ import annotations

import itertools

from ..errors import BuildScaleError, FreshLetterError
from ..machines import (BuchiAutomaton, Configuration, CounterMachine,
                        MachineError, Run, RunStep, Transition,
                        lambda_burst_bound, validate_run)
from .certificates import BlockSpan, RunCertificate

STATE_CAP = 250_000


def _wrap(q: str, f: int, p: int) -> str:
    return f"{q}&{f}&{p}"


def build_phi_wrapper(b: BuchiAutomaton, filler_count: int,
                      filler: str = "F") -> BuchiAutomaton:
    m = b.machine
    if filler in m.alphabet:
        raise FreshLetterError(f"filler letter {filler!r} is already in the alphabet")
    if filler_count < 0:
        raise MachineError("filler count must be nonnegative")
    burst = lambda_burst_bound(m)
    if burst > filler_count:
        raise MachineError(
            f"lambda bursts reach {burst}, filler window is {filler_count}")
    est = len(m.states) * (filler_count + 1) * 2
    if est > STATE_CAP:
        raise BuildScaleError("wrapper would exceed the state cap",
                              est, STATE_CAP)

    lam = [t for t in m.transitions if t.input is None]
    letters = [t for t in m.transitions if t.input is not None]
    guard_combos = list(itertools.product((0, 1), repeat=m.k))
    zeros = (0,) * m.k
    trans: list[Transition] = []
    states: list[str] = []
    for q in sorted(m.states):
        for f in range(filler_count + 1):
            for p in (0, 1):
                here = _wrap(q, f, p)
                states.append(here)
                if f < filler_count:
                    for t in lam:
                        if t.source != q:
                            continue
                        pulse = 1 if t.destination in b.accepting else 0
                        trans.append(Transition(
                            here, filler, t.guard,
                            _wrap(t.destination, f + 1, pulse), t.delta))
                    for g in guard_combos:
                        trans.append(Transition(
                            here, filler, g, _wrap(q, f + 1, 0), zeros))
                else:
                    for t in letters:
                        if t.source != q:
                            continue
                        pulse = 1 if t.destination in b.accepting else 0
                        trans.append(Transition(
                            here, t.input, t.guard,
                            _wrap(t.destination, 0, pulse), t.delta))
    machine = CounterMachine(k=m.k, alphabet=m.alphabet | {filler},
                             states=frozenset(states),
                             initial=_wrap(m.initial, 0, 0),
                             transitions=tuple(trans))
    accepting = frozenset(s for s in states if s.rsplit("&", 1)[1] == "1")
    return BuchiAutomaton(machine, accepting)


def lift_run_phi(b: BuchiAutomaton, filler_count: int, run: Run,
                 prefix_len: int | None = None,
                 filler: str = "F",
                 blocks: tuple[BlockSpan, ...] | None = None) -> RunCertificate:
    """Lift a run of the wrapped machine to the wrapper: lambda steps are
    consumed as filler as they occur, the window is topped up with idles,
    then the letter is read.  Blocks span one filler window plus its letter;
    passing `blocks` (spans over the source run's steps) translates those
    spans to wrapper step indices instead.
    """
    m = b.machine
    word = [s.consumed for s in run.steps if s.consumed is not None]
    bad = validate_run(m, word, run)
    if bad is not None:
        raise MachineError(f"source run invalid: {bad}")
    if run.start.state != m.initial or any(run.start.counters):
        raise MachineError("lift needs a run from the initial configuration")

    wrapper = build_phi_wrapper(b, filler_count, filler)
    index_of = {}
    for i, t in enumerate(wrapper.machine.transitions):
        index_of.setdefault(t, i)
    zeros = (0,) * m.k

    steps: list[RunStep] = []
    spans: list[BlockSpan] = []
    cur_q, cur_f, cur_p = m.initial, 0, 0
    counters = run.start.counters
    block_start = 0
    block_index = 1

    def emit(token, guard, dest_q, dest_f, dest_p, delta):
        nonlocal cur_q, cur_f, cur_p, counters
        want = Transition(_wrap(cur_q, cur_f, cur_p), token, guard,
                          _wrap(dest_q, dest_f, dest_p), delta)
        idx = index_of.get(want)
        if idx is None:
            raise MachineError(f"wrapper is missing {want}")
        counters = tuple(c + d for c, d in zip(counters, delta))
        cur_q, cur_f, cur_p = dest_q, dest_f, dest_p
        steps.append(RunStep(token, idx, Configuration(_wrap(cur_q, cur_f, cur_p), counters)))

    def idle_to_window_end():
        while cur_f < filler_count:
            g = tuple(1 if c > 0 else 0 for c in counters)
            emit(filler, g, cur_q, cur_f + 1, 0, zeros)

    # marks[j] = wrapper step count before source step j was processed
    marks: list[int] = []
    for st in run.steps:
        marks.append(len(steps))
        t = m.transitions[st.transition_index]
        pulse = 1 if t.destination in b.accepting else 0
        if st.consumed is None:
            if cur_f >= filler_count:
                raise MachineError("lambda burst exceeds the filler window")
            emit(filler, t.guard, t.destination, cur_f + 1, pulse, t.delta)
        else:
            idle_to_window_end()
            emit(st.consumed, t.guard, t.destination, 0, pulse, t.delta)
            spans.append(BlockSpan(block_index, block_start, len(steps)))
            block_index += 1
            block_start = len(steps)
    marks.append(len(steps))

    needed = len(steps)
    if prefix_len is not None and prefix_len != needed:
        if prefix_len < needed:
            raise MachineError(
                f"prefix too short to host the lift: need {needed} letters")
        extra = prefix_len - needed
        room = filler_count - cur_f
        if extra > room:
            raise MachineError(
                f"run pins {block_index - 1} blocks; prefix of {prefix_len} "
                f"letters passes the next letter point at {needed + room}")
        for _ in range(extra):
            g = tuple(1 if c > 0 else 0 for c in counters)
            emit(filler, g, cur_q, cur_f + 1, 0, zeros)

    if blocks is not None:
        spans = [BlockSpan(bs.index, marks[bs.start], marks[bs.end])
                 for bs in blocks]
    wrapped = Run(Configuration(_wrap(m.initial, 0, 0), run.start.counters),
                  tuple(steps))
    return RunCertificate(wrapped, "phi", tuple(spans))
