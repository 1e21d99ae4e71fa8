"""Sum of two omega-languages: keep playing the first, or opt out once.

A run either stays inside the copy of bL on the small alphabet forever, or
after any finite prefix of small-alphabet letters reads a single switch
letter: a plus letter hands the rest of the word to bLp, a minus letter to
its caller-supplied complement.  Complementation is not effective here, so
the complement automaton is an argument, not a derived object.
"""

from __future__ import annotations

from ..machines import (BuchiAutomaton, CounterMachine, MachineError,
                        Transition, pad_counters)

_INIT = "i0"


def _tagged(tag: str, b: BuchiAutomaton, k: int) -> tuple[list[Transition], set[str], set[str]]:
    m = pad_counters(b.machine, k)
    trans = [Transition(f"{tag}.{t.source}", t.input, t.guard,
                        f"{tag}.{t.destination}", t.delta)
             for t in m.transitions]
    states = {f"{tag}.{s}" for s in m.states}
    acc = {f"{tag}.{s}" for s in b.accepting}
    return trans, states, acc


def wadge_sum(bL: BuchiAutomaton, bLp: BuchiAutomaton, bLpComp: BuchiAutomaton,
              plus: frozenset[str] | set[str],
              minus: frozenset[str] | set[str]) -> BuchiAutomaton:
    """Sum automaton over the large alphabet.

    bL runs on alphabet X, bLp and bLpComp on Y with X a proper subset;
    plus and minus must partition Y - X and both be nonempty.
    """
    x = bL.machine.alphabet
    y = bLp.machine.alphabet
    plus = frozenset(plus)
    minus = frozenset(minus)
    if bLpComp.machine.alphabet != y:
        raise MachineError("the pair automaton and its complement must share an alphabet")
    if not x <= y:
        raise MachineError("the kept language's alphabet must embed in the large one")
    if not plus or not minus:
        raise MachineError("both switch classes must be nonempty")
    if plus & minus or (plus | minus) != y - x:
        raise MachineError("switch classes must partition the fresh letters")

    k = max(bL.machine.k, bLp.machine.k, bLpComp.machine.k)
    zeros = (0,) * k
    tl, sl, al = _tagged("L", bL, k)
    tp, sp, ap = _tagged("P", bLp, k)
    tc, sc, ac = _tagged("C", bLpComp, k)

    trans = tl + tp + tc
    # enter the kept copy on its own first moves
    ml = pad_counters(bL.machine, k)
    for t in ml.transitions:
        if t.source == ml.initial:
            trans.append(Transition(_INIT, t.input, t.guard,
                                    f"L.{t.destination}", t.delta))
    # or idle through any finite small-alphabet prefix, then switch once
    for a in sorted(x):
        trans.append(Transition(_INIT, a, zeros, _INIT, zeros))
    for a in sorted(plus):
        trans.append(Transition(_INIT, a, zeros, f"P.{bLp.machine.initial}", zeros))
    for a in sorted(minus):
        trans.append(Transition(_INIT, a, zeros, f"C.{bLpComp.machine.initial}", zeros))

    states = frozenset({_INIT} | sl | sp | sc)
    machine = CounterMachine(k, y, states, _INIT, tuple(trans))
    return BuchiAutomaton(machine, frozenset(al | ap | ac))
