"""One-counter acceptor for the marker-coded run language of a real-time
k-counter automaton, with prime-ratio length propagation between blocks.

Block protocol: the opening A plus Q-1 zeros are checked in finite control;
the rest of the A-run is counted up as v_i while residues mod each prime are
tracked in control, so the guard bit "counter t positive", i.e. p_t divides
the run length with positive valuation, is exactly "residue t is zero".  At
the block letter a transition of the source machine is guessed among those
whose guard matches the residues.  The B-run is then consumed by ratio
counting: with M the product of primes whose delta is +1 and D the product
of those with -1, one counter unit is paid per group of M zeros, spread as a
first-letter decrement followed by D-1 lambda decrements, so the counter
empties exactly when the B-run length is v_i * M / D.  A trailing z-part is
counted up and drained against the next block's opening zeros, which pins
u_{i+1} = z_i.  Accepting states are the post-guess states whose source
state is accepting; the result is intersected with a deterministic guard for
the cyclic marker pattern.
"""

from __future__ import annotations

import itertools
import math

from ..errors import ArityError, BuildScaleError, FreshLetterError
from ..machines import (BuchiAutomaton, Configuration, CounterMachine,
                        MachineError, Run, RunStep, Transition,
                        intersect_det_buchi, is_real_time,
                        lift_run_intersection, validate_run)
from ..words import HCoding
from .certificates import BlockSpan, RunCertificate

STATE_CAP = 250_000


def _dots(values) -> str:
    return ".".join(str(v) for v in values)


def _v_state(q: str, res: tuple[int, ...]) -> str:
    return f"v&{q}&{_dots(res)}"


def _x_state(q: str, delta: tuple[int, ...]) -> str:
    return f"x&{q}&{_dots(delta)}"


def _w_state(q: str, ratio: tuple[int, int], g: int) -> str:
    return f"w&{q}&{ratio[0]}.{ratio[1]}&{g}"


def _wl_state(q: str, ratio: tuple[int, int], l: int) -> str:
    return f"wl&{q}&{ratio[0]}.{ratio[1]}&{l}"


def _z_state(q: str) -> str:
    return f"z&{q}"


def _a_state(q: str) -> str:
    return f"a&{q}"


def _u1_state(c: int) -> str:
    return f"u1&{c}"


def _ratio(primes: tuple[int, ...], delta: tuple[int, ...]) -> tuple[int, int]:
    mul = math.prod(p for p, d in zip(primes, delta) if d == 1)
    div = math.prod(p for p, d in zip(primes, delta) if d == -1)
    return mul, div


def _consistent(guard: tuple[int, ...], res: tuple[int, ...]) -> bool:
    # positive valuation of the run length <=> divisible <=> residue zero
    return all((g == 1) == (r == 0) for g, r in zip(guard, res))


def _check_markers(alphabet: frozenset[str], coding: HCoding) -> None:
    clash = alphabet & {coding.marker_a, coding.marker_b, coding.zero}
    if clash:
        raise FreshLetterError(
            f"marker letters {sorted(clash)} collide with the alphabet")


def build_script_l_guard(sigma: frozenset[str] | set[str],
                         marker_a: str = "A", marker_b: str = "B",
                         zero: str = "0") -> BuchiAutomaton:
    """Deterministic complete acceptor for never leaving the cyclic pattern
    A.0*.letter.B.0*; every state except the rejecting sink is accepting, so
    the product stays accepting once per block."""
    sigma = frozenset(sigma)
    full = sigma | {marker_a, marker_b, zero}
    table = {
        "S0": {marker_a: "SA"},
        "SA": {zero: "SA", **{a: "SS" for a in sigma}},
        "SS": {marker_b: "SB"},
        "SB": {zero: "SB", marker_a: "SA"},
        "sink": {},
    }
    trans = [Transition(src, a, (), row.get(a, "sink"), ())
             for src, row in table.items() for a in sorted(full)]
    m = CounterMachine(k=0, alphabet=full,
                       states=frozenset(table), initial="S0",
                       transitions=tuple(trans))
    return BuchiAutomaton(m, frozenset({"SA", "SS", "SB"}))


def _estimate_states(a: BuchiAutomaton, primes: tuple[int, ...]) -> int:
    q = math.prod(primes)
    n_states = len(a.machine.states)
    # u1 chain + v residue grid + guess/z/a states + ratio programs
    est = 1 + q + n_states * q + 3 * n_states
    for t in a.machine.transitions:
        mul, div = _ratio(primes, t.delta)
        est += 1 + mul + div
    return est


def _build_raw(a: BuchiAutomaton, primes: tuple[int, ...],
               coding: HCoding) -> BuchiAutomaton:
    m = a.machine
    big_q = coding.q
    mark_a, mark_b, zero = coding.marker_a, coding.marker_b, coding.zero
    ones = tuple(1 % p for p in primes)
    trans: list[Transition] = []
    states: set[str] = {"init"}

    def emit(src, inp, g, dst, d):
        states.add(src)
        states.add(dst)
        trans.append(Transition(src, inp, (g,), dst, (d,)))

    emit("init", mark_a, 0, _u1_state(0), 0)
    for c in range(big_q - 1):
        emit(_u1_state(c), zero, 0, _u1_state(c + 1), 0)
    emit(_u1_state(big_q - 1), zero, 0, _v_state(m.initial, ones), 1)

    combos = list(itertools.product(*(range(p) for p in primes)))
    for q in sorted(m.states):
        for res in combos:
            here = _v_state(q, res)
            nxt = tuple((r + 1) % p for r, p in zip(res, primes))
            emit(here, zero, 1, _v_state(q, nxt), 1)
        # guesses: any source transition whose guard matches the residues
        for res in combos:
            here = _v_state(q, res)
            for t in m.transitions:
                if t.source == q and _consistent(t.guard, res):
                    emit(here, t.input, 1, _x_state(t.destination, t.delta), 0)

    seen: set[tuple[str, tuple[int, ...]]] = set()
    for t in m.transitions:
        key = (t.destination, t.delta)
        if key in seen:
            continue
        seen.add(key)
        ratio = _ratio(primes, t.delta)
        mul, div = ratio
        xq = _x_state(*key)
        emit(xq, mark_b, 1, _w_state(t.destination, ratio, 0), 0)
        boundary = _w_state(t.destination, ratio, 0)
        after_first = _wl_state(t.destination, ratio, 1) if div >= 2 \
            else _w_state(t.destination, ratio, 1 % mul)
        emit(boundary, zero, 1, after_first, -1)
        for l in range(1, div):
            dst = _wl_state(t.destination, ratio, l + 1) if l + 1 < div \
                else _w_state(t.destination, ratio, 1 % mul)
            emit(_wl_state(t.destination, ratio, l), None, 1, dst, -1)
        for g in range(1, mul):
            for gv in (0, 1):
                emit(_w_state(t.destination, ratio, g), zero, gv,
                     _w_state(t.destination, ratio, (g + 1) % mul), 0)
        emit(boundary, zero, 0, _z_state(t.destination), 1)
        emit(boundary, mark_a, 0, _a_state(t.destination), 0)

    for q in sorted(m.states):
        emit(_z_state(q), zero, 1, _z_state(q), 1)
        emit(_z_state(q), mark_a, 1, _a_state(q), 0)
        emit(_a_state(q), zero, 1, _a_state(q), -1)
        emit(_a_state(q), zero, 0, _v_state(q, ones), 1)

    accepting = frozenset(_x_state(t.destination, t.delta)
                          for t in m.transitions
                          if t.destination in a.accepting)
    full = m.alphabet | {mark_a, mark_b, zero}
    machine = CounterMachine(k=1, alphabet=full, states=frozenset(states),
                             initial="init", transitions=tuple(trans))
    return BuchiAutomaton(machine, accepting)


def _parts(a: BuchiAutomaton, primes: tuple[int, ...]
           ) -> tuple[BuchiAutomaton, BuchiAutomaton, BuchiAutomaton]:
    primes = tuple(primes)
    coding = HCoding(primes=primes)
    m = a.machine
    if m.k != len(primes):
        raise ArityError(f"machine has k={m.k} but {len(primes)} primes given")
    if not is_real_time(m):
        raise MachineError("block protocol needs a real-time source machine")
    _check_markers(m.alphabet, coding)
    est = _estimate_states(a, primes)
    if est > STATE_CAP:
        raise BuildScaleError(
            "construction would exceed the state cap", est, STATE_CAP)
    raw = _build_raw(a, primes, coding)
    guard = build_script_l_guard(m.alphabet, coding.marker_a,
                                 coding.marker_b, coding.zero)
    return raw, guard, intersect_det_buchi(raw, guard)


def build_script_L(a: BuchiAutomaton,
                   primes: tuple[int, ...]) -> BuchiAutomaton:
    return _parts(a, primes)[2]


def covered_prefix_length(primes: tuple[int, ...], blocks: int) -> int:
    """Letters of coded prefix a lift over this many complete blocks needs."""
    big_q = math.prod(primes)
    total = 0
    for i in range(1, blocks + 1):
        total += 3 + big_q ** i + big_q ** (i + 1)
    return total


class _RawWalker:
    """Replays the deterministic block schedule on the raw machine."""

    def __init__(self, machine: CounterMachine, start: Configuration):
        self.machine = machine
        self.cfg = start
        self.steps: list[RunStep] = []

    def to(self, token: str | None, dest: str) -> None:
        cands = [(i, t) for i, t in self.machine.outgoing(self.cfg.state, token)
                 if t.destination == dest and t.matches(self.cfg.counters)]
        if len(cands) != 1:
            raise MachineError(
                f"schedule broke at {self.cfg.state!r} on {token!r} "
                f"toward {dest!r}: {len(cands)} candidates")
        i, t = cands[0]
        counters = tuple(c + d for c, d in zip(self.cfg.counters, t.delta))
        self.cfg = Configuration(dest, counters)
        self.steps.append(RunStep(token, i, self.cfg))


def _block_table(a: BuchiAutomaton, primes: tuple[int, ...],
                 run: Run) -> list[dict]:
    """Per-block lengths and the pinned transition, from the source run."""
    big_q = math.prod(primes)
    table = []
    v = 1
    for i, st in enumerate(run.steps, start=1):
        t = a.machine.transitions[st.transition_index]
        mul, div = _ratio(primes, t.delta)
        if v % div != 0:
            raise MachineError(
                f"block {i}: run length {v} not divisible by {div}")
        w = v * mul // div
        z = big_q ** (i + 1) - w
        if z <= 0:
            raise MachineError(f"block {i}: ratio outgrew the pad budget")
        u = big_q - 1 if i == 1 else table[-1]["z"]
        table.append({"u": u, "v": v, "w": w, "z": z, "t": t,
                      "letter": st.consumed, "mul": mul, "div": div})
        v = w
    return table


def lift_run_script_L(a: BuchiAutomaton, primes: tuple[int, ...], run: Run,
                      prefix_len: int | None = None) -> RunCertificate:
    """Lift a source run (from its initial configuration) to the built
    acceptor, covering one coded block per source step."""
    primes = tuple(primes)
    raw, guard, prod = _parts(a, primes)
    m = a.machine
    word = [s.consumed for s in run.steps]
    bad = validate_run(m, word, run)
    if bad is not None:
        raise MachineError(f"source run invalid: {bad}")
    if run.start.state != m.initial or any(run.start.counters):
        raise MachineError("lift needs a run from the initial configuration")

    big_q = math.prod(primes)
    blocks = _block_table(a, primes, run)
    needed = covered_prefix_length(primes, len(blocks))
    ones = tuple(1 % p for p in primes)
    walker = _RawWalker(raw.machine, Configuration("init", (0,)))
    spans: list[BlockSpan] = []
    coding = HCoding(primes=primes)
    zero, mark_a, mark_b = coding.zero, coding.marker_a, coding.marker_b

    state_q = m.initial
    for i, blk in enumerate(blocks, start=1):
        start_idx = len(walker.steps)
        if i == 1:
            walker.to(mark_a, _u1_state(0))
            for c in range(big_q - 1):
                walker.to(zero, _u1_state(c + 1))
            walker.to(zero, _v_state(state_q, ones))
        else:
            walker.to(mark_a, _a_state(state_q))
            for _ in range(blk["u"]):
                walker.to(zero, _a_state(state_q))
            walker.to(zero, _v_state(state_q, ones))
        res = ones
        for _ in range(blk["v"] - 1):
            res = tuple((r + 1) % p for r, p in zip(res, primes))
            walker.to(zero, _v_state(state_q, res))
        t = blk["t"]
        ratio = (blk["mul"], blk["div"])
        walker.to(blk["letter"], _x_state(t.destination, t.delta))
        state_q = t.destination
        walker.to(mark_b, _w_state(state_q, ratio, 0))
        mul, div = ratio
        for n in range(blk["w"]):
            g = n % mul
            if g == 0:
                nxt = _wl_state(state_q, ratio, 1) if div >= 2 \
                    else _w_state(state_q, ratio, 1 % mul)
                walker.to(zero, nxt)
                for l in range(1, div):
                    dst = _wl_state(state_q, ratio, l + 1) if l + 1 < div \
                        else _w_state(state_q, ratio, 1 % mul)
                    walker.to(None, dst)
            else:
                walker.to(zero, _w_state(state_q, ratio, (g + 1) % mul))
        walker.to(zero, _z_state(state_q))
        for _ in range(blk["z"] - 1):
            walker.to(zero, _z_state(state_q))
        spans.append(BlockSpan(i, start_idx, len(walker.steps)))

    consumed = needed
    if prefix_len is not None and prefix_len != needed:
        if prefix_len < needed:
            raise MachineError(
                f"prefix too short to host the lift: need {needed} letters")
        extra = prefix_len - needed
        u_next = blocks[-1]["z"] if blocks else None
        v_next = blocks[-1]["w"] if blocks else None
        room = 1 + (u_next + v_next if blocks else 0)
        if not blocks or extra > room:
            raise MachineError(
                f"run pins {len(blocks)} blocks; prefix of {prefix_len} "
                f"letters passes the next guess point at {needed + room}")
        walker.to(mark_a, _a_state(state_q))
        extra -= 1
        drained = 0
        while extra > 0 and drained < u_next:
            walker.to(zero, _a_state(state_q))
            drained += 1
            extra -= 1
        if extra > 0:
            walker.to(zero, _v_state(state_q, ones))
            extra -= 1
            res = ones
            while extra > 0:
                res = tuple((r + 1) % p for r, p in zip(res, primes))
                walker.to(zero, _v_state(state_q, res))
                extra -= 1
        consumed = prefix_len

    if not blocks:
        # deterministic control prefix: opening marker plus Q-1 zeros
        walker.to(mark_a, _u1_state(0))
        for c in range(big_q - 1):
            walker.to(zero, _u1_state(c + 1))

    raw_run = Run(Configuration("init", (0,)), tuple(walker.steps))
    lifted = lift_run_intersection(raw, guard, raw_run)
    return RunCertificate(lifted, "script-l", tuple(spans))


def _split_product(name: str) -> str:
    return name.rsplit("&", 2)[0]


def project_run_script_L(a: BuchiAutomaton, primes: tuple[int, ...],
                         cert: RunCertificate) -> Run:
    """Recover the source run from a lifted certificate by reading the guess
    steps back off the product state names."""
    primes = tuple(primes)
    m = a.machine
    raw, guard, prod = _parts(a, primes)
    word = [s.consumed for s in cert.run.steps if s.consumed is not None]
    bad = validate_run(prod.machine, word, cert.run)
    if bad is not None:
        raise MachineError(f"certificate invalid: {bad}")

    steps: list[RunStep] = []
    counters = (0,) * m.k
    prev = cert.run.start.state
    for st in cert.run.steps:
        if st.consumed in m.alphabet:
            src_name = _split_product(prev)
            dst_name = _split_product(st.result.state)
            if not (src_name.startswith("v&") and dst_name.startswith("x&")):
                raise MachineError(
                    f"letter {st.consumed!r} consumed outside a guess step")
            res = tuple(int(r) for r in
                        src_name[src_name.rfind("&") + 1:].split("."))
            q = src_name[2:src_name.rfind("&")]
            delta = tuple(int(d) for d in
                          dst_name[dst_name.rfind("&") + 1:].split("."))
            q2 = dst_name[2:dst_name.rfind("&")]
            g = tuple(1 if r == 0 else 0 for r in res)
            want = Transition(q, st.consumed, g, q2, delta)
            idx = next((i for i, t in enumerate(m.transitions) if t == want),
                       None)
            if idx is None:
                raise MachineError(f"no source transition matches {want}")
            counters = tuple(c + d for c, d in zip(counters, delta))
            steps.append(RunStep(st.consumed, idx,
                                 Configuration(q2, counters)))
        prev = st.result.state
    return Run(Configuration(m.initial, (0,) * m.k), tuple(steps))
