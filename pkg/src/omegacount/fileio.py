"""Line-oriented text formats for automata, words, and runs.

'#' starts a comment anywhere in a line; blank lines are skipped.  The
writers emit a canonical form (sorted sets, transitions in index order, one
space between tokens, trailing newline) so save(load(f)) is byte-identical
for canonical files.  Transition order in a file defines transitionIndex.

Automaton:  kcounters / alphabet / states / initial / accepting-or-table /
            trans <src> <letter|-> <guardbits> <dst> <d1> ... <dk>
            (guardbits over {0,1}, 1 = positive required; "-" when k = 0)
Word:       zero or more `coded theta:<S> | h:<p1,...> | phi:<L>` lines,
            outermost coding first, then `lasso <spoke> | <cycle>`, then an
            optional `prefix <n>` directive.
Run:        start <state> <c1> ... <ck>
            step <letter|-> <tidx> <state> <c1> ... <ck>
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormatError
from .machines import (LAMBDA_TOKEN, BuchiAutomaton, Configuration, CounterMachine,
                       MachineError, MullerAutomaton, Run, RunStep, Transition)
from .words import (CodingSpec, HCoding, LassoWord, PhiCoding, ThetaCoding,
                    coded_prefix, lasso_prefix)


def _lines(text: str) -> list[tuple[int, list[str]]]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            out.append((no, body.split()))
    return out


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what}: expected an integer, got {tok!r}", no) from None


def load_automaton(text: str) -> BuchiAutomaton | MullerAutomaton:
    k = None
    alphabet: list[str] | None = None
    states: list[str] | None = None
    initial = None
    accepting: list[str] | None = None
    table: list[list[str]] = []
    trans: list[Transition] = []
    for no, toks in _lines(text):
        head, rest = toks[0], toks[1:]
        if head == "kcounters":
            if len(rest) != 1:
                raise FormatError("kcounters takes one value", no)
            k = _int(rest[0], no, "kcounters")
        elif head == "alphabet":
            alphabet = rest
        elif head == "states":
            states = rest
        elif head == "initial":
            if len(rest) != 1:
                raise FormatError("initial takes one state id", no)
            initial = rest[0]
        elif head == "accepting":
            if accepting is not None:
                raise FormatError("duplicate accepting line", no)
            accepting = rest
        elif head == "table":
            table.append(rest)
        elif head == "trans":
            if k is None:
                raise FormatError("trans before kcounters", no)
            need = 4 + k
            if len(rest) != need:
                raise FormatError(f"trans needs {need} fields for k={k}, got {len(rest)}", no)
            src, letter, guardbits, dst = rest[0], rest[1], rest[2], rest[3]
            input = None if letter == LAMBDA_TOKEN else letter
            if k == 0:
                if guardbits != "-":
                    raise FormatError('guardbits must be "-" when k = 0', no)
                guard: tuple[int, ...] = ()
            else:
                if len(guardbits) != k or any(c not in "01" for c in guardbits):
                    raise FormatError(f"guardbits must be {k} chars over 0/1", no)
                guard = tuple(int(c) for c in guardbits)
            delta = []
            for tok in rest[4:]:
                d = _int(tok, no, "delta")
                if d not in (-1, 0, 1):
                    raise FormatError(f"delta {tok!r} outside -1/0/+1", no)
                delta.append(d)
            trans.append(Transition(src, input, guard, dst, tuple(delta)))
        else:
            raise FormatError(f"unknown directive {head!r}", no)
    if k is None or states is None or initial is None:
        raise FormatError("missing kcounters, states, or initial")
    try:
        machine = CounterMachine(k, frozenset(alphabet or ()), frozenset(states),
                                 initial, tuple(trans))
    except MachineError as e:
        raise FormatError(str(e)) from e
    if accepting is not None and table:
        raise FormatError("file mixes accepting and table lines")
    if accepting is not None:
        return BuchiAutomaton(machine, frozenset(accepting))
    if table:
        return MullerAutomaton(machine, tuple(frozenset(f) for f in table))
    raise FormatError("missing accepting (Buchi) or table (Muller) lines")


def _join(head: str, toks) -> str:
    toks = list(toks)
    return head + (" " + " ".join(toks) if toks else "")


def dump_automaton(aut: BuchiAutomaton | MullerAutomaton) -> str:
    m = aut.machine
    lines = [f"kcounters {m.k}",
             _join("alphabet", sorted(m.alphabet)),
             _join("states", sorted(m.states)),
             f"initial {m.initial}"]
    if isinstance(aut, BuchiAutomaton):
        lines.append(_join("accepting", sorted(aut.accepting)))
    else:
        for entry in aut.table:
            lines.append(_join("table", sorted(entry)))
    for t in m.transitions:
        guardbits = "-" if m.k == 0 else "".join(str(g) for g in t.guard)
        letter = LAMBDA_TOKEN if t.input is None else t.input
        toks = [t.source, letter, guardbits, t.destination] + [str(d) for d in t.delta]
        lines.append(_join("trans", toks))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WordSpec:
    """A lasso plus a coding chain, innermost coding first."""

    lasso: LassoWord
    chain: tuple[CodingSpec, ...]
    prefix: int | None = None

    def prefix_letters(self, n: int) -> list[str]:
        if self.chain:
            return coded_prefix(self.lasso, self.chain, n)
        return lasso_prefix(self.lasso, n)


def _parse_coding(tag: str, no: int) -> CodingSpec:
    name, sep, arg = tag.partition(":")
    if not sep:
        raise FormatError(f"coded needs name:args, got {tag!r}", no)
    if name == "theta":
        return ThetaCoding(_int(arg, no, "theta S"))
    if name == "h":
        primes = tuple(_int(p, no, "h prime") for p in arg.split(","))
        return HCoding(primes)
    if name == "phi":
        return PhiCoding(_int(arg, no, "phi L"))
    raise FormatError(f"unknown coding {name!r}", no)


def load_word(text: str) -> WordSpec:
    outer_first: list[CodingSpec] = []
    lasso = None
    prefix = None
    for no, toks in _lines(text):
        head, rest = toks[0], toks[1:]
        if head == "coded":
            if lasso is not None:
                raise FormatError("coded line after the lasso line", no)
            if len(rest) != 1:
                raise FormatError("coded takes one name:args token", no)
            outer_first.append(_parse_coding(rest[0], no))
        elif head == "lasso":
            if lasso is not None:
                raise FormatError("duplicate lasso line", no)
            if "|" not in rest:
                raise FormatError('lasso needs a standalone "|" separating spoke and cycle', no)
            cut = rest.index("|")
            spoke, cycle = rest[:cut], rest[cut + 1:]
            if "|" in cycle:
                raise FormatError('more than one "|" in lasso', no)
            try:
                lasso = LassoWord(tuple(spoke), tuple(cycle),
                                  frozenset(spoke) | frozenset(cycle))
            except ValueError as e:
                raise FormatError(str(e), no) from e
        elif head == "prefix":
            if len(rest) != 1:
                raise FormatError("prefix takes one length", no)
            prefix = _int(rest[0], no, "prefix")
        else:
            raise FormatError(f"unknown directive {head!r}", no)
    if lasso is None:
        raise FormatError("missing lasso line")
    return WordSpec(lasso, tuple(reversed(outer_first)), prefix)


def dump_word(spec: WordSpec) -> str:
    lines = []
    for c in reversed(spec.chain):  # outermost first on disk
        if isinstance(c, ThetaCoding):
            lines.append(f"coded theta:{c.S}")
        elif isinstance(c, HCoding):
            lines.append("coded h:" + ",".join(str(p) for p in c.primes))
        else:
            lines.append(f"coded phi:{c.L}")
    lines.append(_join("lasso", list(spec.lasso.spoke) + ["|"] + list(spec.lasso.cycle)))
    if spec.prefix is not None:
        lines.append(f"prefix {spec.prefix}")
    return "\n".join(lines) + "\n"


def load_run(text: str) -> Run:
    start = None
    steps: list[RunStep] = []
    for no, toks in _lines(text):
        head, rest = toks[0], toks[1:]
        if head == "start":
            if start is not None:
                raise FormatError("duplicate start line", no)
            if not rest:
                raise FormatError("start needs a state", no)
            start = Configuration(rest[0], tuple(_int(t, no, "counter") for t in rest[1:]))
        elif head == "step":
            if start is None:
                raise FormatError("step before start", no)
            if len(rest) < 3:
                raise FormatError("step needs letter, index, state, counters", no)
            letter = None if rest[0] == LAMBDA_TOKEN else rest[0]
            idx = _int(rest[1], no, "transition index")
            cfg = Configuration(rest[2], tuple(_int(t, no, "counter") for t in rest[3:]))
            steps.append(RunStep(letter, idx, cfg))
        else:
            raise FormatError(f"unknown directive {head!r}", no)
    if start is None:
        raise FormatError("missing start line")
    return Run(start, tuple(steps))


def dump_run(run: Run) -> str:
    lines = [_join("start", [run.start.state] + [str(c) for c in run.start.counters])]
    for s in run.steps:
        letter = LAMBDA_TOKEN if s.consumed is None else s.consumed
        lines.append(_join("step", [letter, str(s.transition_index), s.result.state]
                           + [str(c) for c in s.result.counters]))
    return "\n".join(lines) + "\n"
