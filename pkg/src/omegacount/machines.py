"""Counter machines with Buchi/Muller acceptance and run validation.

A k-counter machine is a finite control plus k natural-valued counters.
Every transition carries a total guard (each coordinate tests zero or
positive) and a delta vector over {-1, 0, +1}.  The lambda input (spelled
None here, "-" in files) consumes no letter.

Runs are explicit certificates: a start configuration plus, per step, the
consumed token, the index of the transition used, and the resulting
configuration.  validate_run replays them against the transition relation.
A run is not required to begin at the machine's initial state; lifts of
sub-runs into product or union machines rely on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ArityError, MachineError

# reserved spelling of the lambda input in text files; never a letter
LAMBDA_TOKEN = "-"


def _check_token(tok: str, what: str) -> None:
    if not isinstance(tok, str) or not tok:
        raise MachineError(f"{what} must be a nonempty string, got {tok!r}")
    if tok == LAMBDA_TOKEN:
        raise MachineError(f"{what} {tok!r} is reserved for the lambda input")
    if any(c.isspace() for c in tok) or "#" in tok:
        raise MachineError(f"{what} {tok!r} not serializable (whitespace or '#')")


@dataclass(frozen=True, slots=True)
class Transition:
    """One edge: (source, input, guard, destination, delta).

    input None means lambda.  guard coordinates: 0 = counter must equal 0,
    1 = counter must be positive.  delta coordinates in {-1, 0, +1}.
    """

    source: str
    input: str | None
    guard: tuple[int, ...]
    destination: str
    delta: tuple[int, ...]

    def matches(self, counters: tuple[int, ...]) -> bool:
        return all((c > 0) == (g == 1) for g, c in zip(self.guard, counters))


@dataclass
class CounterMachine:
    """Immutable after construction; validation happens in __post_init__."""

    k: int
    alphabet: frozenset[str]
    states: frozenset[str]
    initial: str
    transitions: tuple[Transition, ...]
    _adj: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.alphabet = frozenset(self.alphabet)
        self.states = frozenset(self.states)
        self.transitions = tuple(self.transitions)
        if self.k < 0:
            raise MachineError("k must be a natural number")
        if not self.states:
            raise MachineError("state set must be nonempty")
        for s in self.states:
            _check_token(s, "state id")
        for a in self.alphabet:
            _check_token(a, "letter")
        if self.initial not in self.states:
            raise MachineError(f"initial state {self.initial!r} not in states")
        for i, t in enumerate(self.transitions):
            if t.source not in self.states:
                raise MachineError(f"transition {i}: unknown source {t.source!r}")
            if t.destination not in self.states:
                raise MachineError(f"transition {i}: unknown destination {t.destination!r}")
            if t.input is not None and t.input not in self.alphabet:
                raise MachineError(f"transition {i}: input {t.input!r} not in alphabet")
            if len(t.guard) != self.k or len(t.delta) != self.k:
                raise MachineError(f"transition {i}: guard/delta arity != k={self.k}")
            for g in t.guard:
                if g not in (0, 1):
                    raise MachineError(f"transition {i}: guard values must be 0 or 1")
            for d in t.delta:
                if d not in (-1, 0, 1):
                    raise MachineError(f"transition {i}: delta values must be -1, 0 or +1")
            # zero-test consistency: a counter tested zero cannot decrease
            for g, d in zip(t.guard, t.delta):
                if g == 0 and d == -1:
                    raise MachineError(f"transition {i}: delta -1 under a zero guard")
        self._adj = {}
        for i, t in enumerate(self.transitions):
            self._adj.setdefault((t.source, t.input), []).append((i, t))

    def outgoing(self, state: str, input: str | None) -> list[tuple[int, Transition]]:
        """Indexed transitions with this exact (source, input) pair."""
        return self._adj.get((state, input), [])


@dataclass(frozen=True, slots=True)
class Configuration:
    """Global state (q, c1..ck).  Counters should be naturals; negative
    entries are representable so corrupt certificates can be loaded and
    rejected by validate_run rather than at parse time."""

    state: str
    counters: tuple[int, ...]


@dataclass(frozen=True, slots=True)
class RunStep:
    consumed: str | None
    transition_index: int
    result: Configuration


@dataclass(frozen=True, slots=True)
class Run:
    start: Configuration
    steps: tuple[RunStep, ...]


@dataclass(frozen=True, slots=True)
class BuchiAutomaton:
    machine: CounterMachine
    accepting: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        if not self.accepting <= self.machine.states:
            raise MachineError("accepting set must be a subset of states")


@dataclass(frozen=True, slots=True)
class MullerAutomaton:
    machine: CounterMachine
    table: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(frozenset(f) for f in self.table))
        for f in self.table:
            if not f <= self.machine.states:
                raise MachineError("table entry must be a subset of states")


@dataclass(frozen=True, slots=True)
class RunViolation:
    """First failing step (0-based; -1 = start configuration, len(steps) =
    word not fully consumed) and why."""

    step: int
    reason: str
    detail: str = ""

    def __str__(self):
        msg = f"step {self.step}: {self.reason}"
        return f"{msg} ({self.detail})" if self.detail else msg


def step(machine: CounterMachine, config: Configuration,
         input: str | None) -> list[tuple[int, Configuration]]:
    """All successors of config on the given input token, with the index of
    the transition used.  Deterministic order (by transition index)."""
    if len(config.counters) != machine.k:
        raise ArityError(f"configuration has {len(config.counters)} counters, machine has {machine.k}")
    out = []
    for i, t in machine.outgoing(config.state, input):
        if t.matches(config.counters):
            new = tuple(c + d for c, d in zip(config.counters, t.delta))
            out.append((i, Configuration(t.destination, new)))
    return out


def validate_run(machine: CounterMachine, word: list[str] | tuple[str, ...] | str,
                 run: Run) -> RunViolation | None:
    """None iff the run is a legal complete run over exactly `word`.

    Checks, per step: transition index in range, source matches, consumed
    token matches the transition, guard satisfied, counters stay natural,
    result equals source configuration plus delta.  Finally the projection
    of consumed letters must equal the word with nothing left over.
    """
    word = list(word)
    if len(run.start.counters) != machine.k:
        return RunViolation(-1, "arity", f"start has {len(run.start.counters)} counters, machine k={machine.k}")
    if any(c < 0 for c in run.start.counters):
        return RunViolation(-1, "negative-counter", "start configuration")
    if run.start.state not in machine.states:
        return RunViolation(-1, "source", f"unknown state {run.start.state!r}")
    cur = run.start
    pos = 0
    for i, s in enumerate(run.steps):
        if not (0 <= s.transition_index < len(machine.transitions)):
            return RunViolation(i, "index", f"transition index {s.transition_index} out of range")
        t = machine.transitions[s.transition_index]
        if t.source != cur.state:
            return RunViolation(i, "source", f"transition {s.transition_index} leaves {t.source!r}, run is at {cur.state!r}")
        if s.consumed != t.input:
            return RunViolation(i, "input", f"recorded {s.consumed!r}, transition reads {t.input!r}")
        if not t.matches(cur.counters):
            return RunViolation(i, "guard", f"guard {t.guard} vs counters {cur.counters}")
        if any(c < 0 for c in s.result.counters):
            return RunViolation(i, "negative-counter", f"result {s.result.counters}")
        expected = tuple(c + d for c, d in zip(cur.counters, t.delta))
        if s.result.state != t.destination:
            return RunViolation(i, "destination", f"recorded {s.result.state!r}, transition enters {t.destination!r}")
        if s.result.counters != expected:
            return RunViolation(i, "delta", f"recorded {s.result.counters}, expected {expected}")
        if s.consumed is not None:
            if pos >= len(word) or word[pos] != s.consumed:
                return RunViolation(i, "projection", f"letter {s.consumed!r} at word position {pos}")
            pos += 1
        cur = s.result
    if pos != len(word):
        return RunViolation(len(run.steps), "projection", f"run consumed {pos} of {len(word)} letters")
    return None


def is_real_time(machine: CounterMachine) -> bool:
    return all(t.input is not None for t in machine.transitions)


def lambda_burst_bound(machine: CounterMachine) -> int | float:
    """Longest chain of consecutive lambda-transitions in the transition
    graph, counters ignored (over-approximation); math.inf on a lambda cycle.
    """
    lam = {}
    for t in machine.transitions:
        if t.input is None:
            lam.setdefault(t.source, []).append(t.destination)
    if not lam:
        return 0
    depth: dict[str, int | float] = {}
    ON_STACK = -1
    for root in lam:
        if root in depth:
            continue
        # iterative DFS: chains can be as long as a coding block
        stack = [(root, iter(lam.get(root, ())))]
        depth[root] = ON_STACK
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                d = depth.get(nxt)
                if d == ON_STACK:
                    return math.inf
                if d is None:
                    depth[nxt] = ON_STACK
                    stack.append((nxt, iter(lam.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                best = 0
                for nxt in lam.get(node, ()):
                    d = depth[nxt]
                    if d is math.inf:
                        return math.inf
                    best = max(best, d + 1)
                depth[node] = best if node in lam else 0
    return max(d for d in depth.values())


def buchi_visit_count(run: Run, accepting: frozenset[str] | set[str]) -> int:
    """Configurations (start included) whose state is accepting."""
    n = 1 if run.start.state in accepting else 0
    return n + sum(1 for s in run.steps if s.result.state in accepting)


def pad_counters(machine: CounterMachine, new_k: int) -> CounterMachine:
    """Append always-zero counters (guard zero, delta 0) up to new_k."""
    if new_k < machine.k:
        raise MachineError(f"cannot pad k={machine.k} down to {new_k}")
    if new_k == machine.k:
        return machine
    extra = new_k - machine.k
    gpad = (0,) * extra
    dpad = (0,) * extra
    trans = tuple(
        Transition(t.source, t.input, t.guard + gpad, t.destination, t.delta + dpad)
        for t in machine.transitions)
    return CounterMachine(new_k, machine.alphabet, machine.states, machine.initial, trans)


def pad_run(run: Run, new_k: int) -> Run:
    """Lift a run into the pad_counters image (extra coordinates stay 0)."""
    extra_old = len(run.start.counters)
    pad = (0,) * (new_k - extra_old)
    start = Configuration(run.start.state, run.start.counters + pad)
    steps = tuple(
        RunStep(s.consumed, s.transition_index,
                Configuration(s.result.state, s.result.counters + pad))
        for s in run.steps)
    return Run(start, steps)


# union: fresh initial state branching into disjoint tagged copies


def _tag(side: str, state: str) -> str:
    return f"{side}.{state}"


_UNION_INITIAL = "u0"


def union(b1: BuchiAutomaton, b2: BuchiAutomaton) -> BuchiAutomaton:
    """Disjoint union behind a fresh (non-accepting) initial state.

    Transition layout: b1's transitions tagged L, then b2's tagged R, then
    branch copies of each side's initial-outgoing transitions re-sourced to
    the fresh initial.  lift_run_union depends on this layout.
    """
    m1, m2 = b1.machine, b2.machine
    if m1.alphabet != m2.alphabet:
        raise MachineError("union requires equal alphabets")
    if m1.k != m2.k:
        raise MachineError("union requires equal k; use pad_counters first")
    states = {_UNION_INITIAL}
    states.update(_tag("L", s) for s in m1.states)
    states.update(_tag("R", s) for s in m2.states)
    trans: list[Transition] = []
    for t in m1.transitions:
        trans.append(Transition(_tag("L", t.source), t.input, t.guard, _tag("L", t.destination), t.delta))
    for t in m2.transitions:
        trans.append(Transition(_tag("R", t.source), t.input, t.guard, _tag("R", t.destination), t.delta))
    for t in m1.transitions:
        if t.source == m1.initial:
            trans.append(Transition(_UNION_INITIAL, t.input, t.guard, _tag("L", t.destination), t.delta))
    for t in m2.transitions:
        if t.source == m2.initial:
            trans.append(Transition(_UNION_INITIAL, t.input, t.guard, _tag("R", t.destination), t.delta))
    machine = CounterMachine(m1.k, m1.alphabet, frozenset(states), _UNION_INITIAL, tuple(trans))
    accepting = {_tag("L", s) for s in b1.accepting} | {_tag("R", s) for s in b2.accepting}
    return BuchiAutomaton(machine, frozenset(accepting))


def lift_run_union(b1: BuchiAutomaton, b2: BuchiAutomaton, run: Run, side: str) -> Run:
    """Retag a run of b1 (side="left") or b2 ("right") into union(b1, b2).

    Pure retagging: the lifted run starts at the tagged copy of the original
    start state, so visit counts are preserved exactly.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    tag = "L" if side == "left" else "R"
    offset = 0 if side == "left" else len(b1.machine.transitions)
    start = Configuration(_tag(tag, run.start.state), run.start.counters)
    steps = tuple(
        RunStep(s.consumed, s.transition_index + offset,
                Configuration(_tag(tag, s.result.state), s.result.counters))
        for s in run.steps)
    return Run(start, steps)


# intersection with a deterministic complete 0-counter automaton


def _pair(q: str, s: str, flag: int) -> str:
    return f"{q}&{s}&{flag}"


def _det_table(d: BuchiAutomaton) -> dict[tuple[str, str], tuple[int, Transition]]:
    """Validate d (k=0, deterministic, complete, real-time) and index it."""
    m = d.machine
    if m.k != 0:
        raise MachineError("intersection guard must have k = 0")
    if not is_real_time(m):
        raise MachineError("intersection guard must be real-time")
    table: dict[tuple[str, str], tuple[int, Transition]] = {}
    for i, t in enumerate(m.transitions):
        key = (t.source, t.input)
        if key in table:
            raise MachineError(f"guard automaton nondeterministic at {key}")
        table[key] = (i, t)
    for q in m.states:
        for a in m.alphabet:
            if (q, a) not in table:
                raise MachineError(f"guard automaton incomplete at ({q!r}, {a!r})")
    return table


def intersect_det_buchi(b: BuchiAutomaton, d: BuchiAutomaton) -> BuchiAutomaton:
    """Two-flag Buchi product of b with a deterministic complete guard d.

    States (q, s, flag).  Flag 1 waits for an accepting b-state, flag 2 for
    an accepting d-state; the update looks at the SOURCE pair, so acceptance
    is read off the flag-2 states whose guard component is accepting.
    b's lambda-transitions leave the guard component in place.
    """
    mb, md = b.machine, d.machine
    if mb.alphabet != md.alphabet:
        raise MachineError("intersection requires equal alphabets")
    dtable = _det_table(d)

    def next_flag(q: str, s: str, flag: int) -> int:
        if flag == 1:
            return 2 if q in b.accepting else 1
        return 1 if s in d.accepting else 2

    states = set()
    trans: list[Transition] = []
    for q in mb.states:
        for s in md.states:
            for flag in (1, 2):
                states.add(_pair(q, s, flag))
    # sorted: transition order must not depend on set iteration order,
    # run files reference transitions by index
    for t in mb.transitions:
        for s in sorted(md.states):
            for flag in (1, 2):
                nf = next_flag(t.source, s, flag)
                if t.input is None:
                    dst = _pair(t.destination, s, nf)
                else:
                    _, dt = dtable[(s, t.input)]
                    dst = _pair(t.destination, dt.destination, nf)
                trans.append(Transition(_pair(t.source, s, flag), t.input, t.guard, dst, t.delta))
    machine = CounterMachine(mb.k, mb.alphabet, frozenset(states),
                             _pair(mb.initial, md.initial, 1), tuple(trans))
    accepting = frozenset(_pair(q, s, 2) for q in mb.states for s in d.accepting)
    return BuchiAutomaton(machine, accepting)


def lift_run_intersection(b: BuchiAutomaton, d: BuchiAutomaton, run: Run) -> Run:
    """Combine a b-run with the unique d-run on the same word.

    The guard component starts at d's initial state (the word is consumed
    from its beginning even when the b-run starts off-initial).
    """
    dtable = _det_table(d)
    mb, md = b.machine, d.machine
    # frozenset iteration order makes positional index math fragile, so
    # resolve product transition indices by content instead
    prod = intersect_det_buchi(b, d)
    by_content: dict[tuple[str, str | None, tuple[int, ...], str, tuple[int, ...]], int] = {}
    for i, t in enumerate(prod.machine.transitions):
        by_content.setdefault((t.source, t.input, t.guard, t.destination, t.delta), i)

    s = md.initial
    flag = 1
    q = run.start.state
    start = Configuration(_pair(q, s, flag), run.start.counters)
    steps = []
    for st in run.steps:
        t = mb.transitions[st.transition_index]
        nf = 2 if flag == 1 and q in b.accepting else (1 if flag == 2 and s in d.accepting else flag)
        if st.consumed is None:
            s2 = s
        else:
            s2 = dtable[(s, st.consumed)][1].destination
        src = _pair(q, s, flag)
        dst = _pair(st.result.state, s2, nf)
        idx = by_content[(src, st.consumed, t.guard, dst, t.delta)]
        steps.append(RunStep(st.consumed, idx, Configuration(dst, st.result.counters)))
        q, s, flag = st.result.state, s2, nf
    return Run(start, tuple(steps))


# Muller to Buchi: guess a table entry, remember the visited subset


def muller_to_buchi(m: MullerAutomaton) -> BuchiAutomaton:
    """Guess-the-entry construction.

    Copy mode mirrors the machine.  On any transition whose destination lies
    in table entry F_i the run may commit to F_i; committed mode only allows
    destinations inside F_i and accumulates them, resetting (through an
    accepting state) whenever the accumulated subset completes F_i.
    Real-time inputs give real-time outputs: every added transition consumes
    exactly what its underlying transition consumes.
    """
    mm = m.machine

    def copy_state(q: str) -> str:
        return f"c&{q}"

    def mem_state(q: str, fi: int, mask: frozenset[str]) -> str:
        return f"m&{q}&{fi}&" + ",".join(sorted(mask))

    states = {copy_state(q) for q in mm.states}
    trans: list[Transition] = []
    for t in mm.transitions:
        trans.append(Transition(copy_state(t.source), t.input, t.guard,
                                copy_state(t.destination), t.delta))
    accepting: set[str] = set()

    # enumerate committed states reachable through the subset dynamics
    for fi, entry in enumerate(m.table):
        masks: set[frozenset[str]] = set()
        seed: set[frozenset[str]] = set()
        for t in mm.transitions:
            if t.destination in entry:
                nm = frozenset({t.destination}) if frozenset({t.destination}) != entry else frozenset()
                seed.add(nm)
                trans.append(Transition(copy_state(t.source), t.input, t.guard,
                                        mem_state(t.destination, fi, nm), t.delta))
                states.add(mem_state(t.destination, fi, nm))
                if nm == frozenset():
                    accepting.add(mem_state(t.destination, fi, nm))
        frontier = set(seed)
        masks.update(seed)
        while frontier:
            nxt: set[frozenset[str]] = set()
            for mask in frontier:
                for t in mm.transitions:
                    if t.destination not in entry:
                        continue
                    nm = mask | {t.destination}
                    if nm == entry:
                        nm = frozenset()
                    if nm not in masks:
                        nxt.add(nm)
            masks.update(nxt)
            frontier = nxt
        for mask in sorted(masks, key=lambda fs: tuple(sorted(fs))):
            for t in mm.transitions:
                if t.source not in entry or t.destination not in entry:
                    continue
                src = mem_state(t.source, fi, mask)
                nm = mask | {t.destination}
                if nm == entry:
                    nm = frozenset()
                dst = mem_state(t.destination, fi, nm)
                states.add(src)
                states.add(dst)
                if nm == frozenset():
                    accepting.add(dst)
                trans.append(Transition(src, t.input, t.guard, dst, t.delta))
    # deduplicate transitions introduced by overlapping mask enumeration
    seen = set()
    unique: list[Transition] = []
    for t in trans:
        key = (t.source, t.input, t.guard, t.destination, t.delta)
        if key not in seen:
            seen.add(key)
            unique.append(t)
    machine = CounterMachine(mm.k, mm.alphabet, frozenset(states),
                             copy_state(mm.initial), tuple(unique))
    return BuchiAutomaton(machine, frozenset(accepting))
