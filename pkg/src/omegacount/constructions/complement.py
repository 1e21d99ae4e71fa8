"""Complement of the marker-coded image set, as a union of four defect
acceptors.

A coded image has the shape A.0^{Q}.y(1).B.0^{Q^2}.A.0^{Q^2}.y(2).B... where
Q is the product of the primes.  A word fails to be an image exactly when one
of four defects occurs: the opening block deviates from its fixed template
(D1), the cyclic marker pattern breaks or the word stalls in zeros (D2), some
B-run and the A-run after it differ in length (D3), or some within-block pair
has B-run length different from Q times the A-run length (D4).  D1 and D2
need no counters; D3 and D4 guess the offending run and check it with one.
"""

from __future__ import annotations

from ..errors import FreshLetterError
from ..machines import (BuchiAutomaton, CounterMachine, Transition,
                        pad_counters, union)
from ..words import HCoding

BAD = "bad"


def _markers(coding: HCoding) -> tuple[str, str, str]:
    return coding.marker_a, coding.marker_b, coding.zero


def _check_alphabet(sigma: frozenset[str], coding: HCoding) -> None:
    clash = sigma & set(_markers(coding))
    if clash:
        raise FreshLetterError(
            f"marker letters {sorted(clash)} collide with the alphabet")


def _sink(state: str, letters, k: int) -> list[Transition]:
    guards = [(0,), (1,)] if k == 1 else [()]
    zero = (0,) * k
    return [Transition(state, a, g, state, zero)
            for a in sorted(letters) for g in guards]


def build_d1(sigma: frozenset[str] | set[str],
             primes: tuple[int, ...]) -> BuchiAutomaton:
    """Accepts words whose opening letters deviate from A.0^Q.letter.B."""
    sigma = frozenset(sigma)
    coding = HCoding(primes=tuple(primes))
    _check_alphabet(sigma, coding)
    mark_a, mark_b, zero = _markers(coding)
    q = coding.q
    full = sigma | {mark_a, mark_b, zero}
    trans: list[Transition] = []

    def tmpl(i: int) -> str:
        return f"t&{i}"

    def expect(state: str, good: set[str], nxt: str) -> None:
        for a in sorted(full):
            dst = nxt if a in good else BAD
            trans.append(Transition(state, a, (), dst, ()))

    expect(tmpl(0), {mark_a}, tmpl(1))
    for i in range(1, q + 1):
        expect(tmpl(i), {zero}, tmpl(i + 1))
    expect(tmpl(q + 1), set(sigma), tmpl(q + 2))
    expect(tmpl(q + 2), {mark_b}, "done")
    trans += _sink("done", full, 0)
    trans += _sink(BAD, full, 0)

    states = frozenset([tmpl(i) for i in range(q + 3)] + ["done", BAD])
    m = CounterMachine(k=0, states=states, alphabet=full, initial=tmpl(0),
                       transitions=tuple(trans))
    return BuchiAutomaton(machine=m, accepting=frozenset({BAD}))


def build_d2(sigma: frozenset[str] | set[str],
             primes: tuple[int, ...]) -> BuchiAutomaton:
    """Accepts breaks of the cyclic pattern (A.0^+.letter.B.0^+)^w and words
    that stall in an endless zero run."""
    sigma = frozenset(sigma)
    coding = HCoding(primes=tuple(primes))
    _check_alphabet(sigma, coding)
    mark_a, mark_b, zero = _markers(coding)
    full = sigma | {mark_a, mark_b, zero}
    trans: list[Transition] = []

    def expect(state: str, table: dict[str, str]) -> None:
        for a in sorted(full):
            dst = table.get(a, BAD)
            trans.append(Transition(state, a, (), dst, ()))

    sig = {a: "rS" for a in sigma}
    expect("start", {mark_a: "rA0"})
    expect("rA0", {zero: "rA1"})
    expect("rA1", {zero: "rA1", **sig})
    expect("rS", {mark_b: "rB0"})
    expect("rB0", {zero: "rB1"})
    expect("rB1", {zero: "rB1", mark_a: "rA0"})
    # a zero run may secretly never end; guess so and survive only on zeros
    for st in ("rA0", "rA1", "rB0", "rB1"):
        trans.append(Transition(st, zero, (), "stall", ()))
    trans.append(Transition("stall", zero, (), "stall", ()))
    trans += _sink(BAD, full, 0)

    states = frozenset(["start", "rA0", "rA1", "rS", "rB0", "rB1",
                        "stall", BAD])
    m = CounterMachine(k=0, states=states, alphabet=full, initial="start",
                       transitions=tuple(trans))
    return BuchiAutomaton(machine=m, accepting=frozenset({BAD, "stall"}))


def build_d3(sigma: frozenset[str] | set[str],
             primes: tuple[int, ...]) -> BuchiAutomaton:
    """Accepts words holding B.0^n.A.0^m followed by a plain letter with
    n, m >= 1 and n != m.  One counter holds the first run's length; the
    sink is entered only on the closing letter."""
    sigma = frozenset(sigma)
    coding = HCoding(primes=tuple(primes))
    _check_alphabet(sigma, coding)
    mark_a, mark_b, zero = _markers(coding)
    full = sigma | {mark_a, mark_b, zero}
    trans: list[Transition] = []

    for a in sorted(full):
        trans.append(Transition("w0", a, (0,), "w0", (0,)))
    trans.append(Transition("w0", mark_b, (0,), "cnt", (0,)))
    # count the guessed B-run; the A move needs at least one zero behind it
    trans.append(Transition("cnt", zero, (0,), "cnt", (1,)))
    trans.append(Transition("cnt", zero, (1,), "cnt", (1,)))
    trans.append(Transition("cnt", mark_a, (1,), "dr0", (0,)))
    # drain against the A-run; dr0 forces the second run to be nonempty
    trans.append(Transition("dr0", zero, (1,), "dr", (-1,)))
    trans.append(Transition("dr", zero, (1,), "dr", (-1,)))
    trans.append(Transition("dr", zero, (0,), "ov", (0,)))
    for a in sorted(sigma):
        # closing letter seals the mismatch; equal lengths leave no move
        trans.append(Transition("dr", a, (1,), BAD, (0,)))
        trans.append(Transition("ov", a, (0,), BAD, (0,)))
    trans.append(Transition("ov", zero, (0,), "ov", (0,)))
    trans += _sink(BAD, full, 1)

    states = frozenset(["w0", "cnt", "dr0", "dr", "ov", BAD])
    m = CounterMachine(k=1, states=states, alphabet=full, initial="w0",
                       transitions=tuple(trans))
    return BuchiAutomaton(machine=m, accepting=frozenset({BAD}))


def build_d4(sigma: frozenset[str] | set[str],
             primes: tuple[int, ...]) -> BuchiAutomaton:
    """Accepts words holding A.0^n.letter.B.0^m.A with n, m >= 1 and
    m != Q*n.  The counter holds the first run's length and pays one unit
    per group of Q zeros; the sink is entered only on the closing A."""
    sigma = frozenset(sigma)
    coding = HCoding(primes=tuple(primes))
    _check_alphabet(sigma, coding)
    mark_a, mark_b, zero = _markers(coding)
    q = coding.q
    full = sigma | {mark_a, mark_b, zero}
    trans: list[Transition] = []

    def grp(j: int) -> str:
        return f"g&{j}"

    for a in sorted(full):
        trans.append(Transition("v0", a, (0,), "v0", (0,)))
    trans.append(Transition("v0", mark_a, (0,), "acnt0", (0,)))
    # acnt0 has a single move so the counted run is nonempty
    trans.append(Transition("acnt0", zero, (0,), "acnt", (1,)))
    trans.append(Transition("acnt", zero, (1,), "acnt", (1,)))
    for a in sorted(sigma):
        trans.append(Transition("acnt", a, (1,), "bexp", (0,)))
    trans.append(Transition("bexp", mark_b, (1,), "b0", (0,)))
    # each full group of Q zeros costs one unit; b0 forces a nonempty run
    trans.append(Transition("b0", zero, (1,), grp(1 % q), (-1,)))
    trans.append(Transition(grp(0), zero, (1,), grp(1 % q), (-1,)))
    trans.append(Transition(grp(0), zero, (0,), "ovr", (0,)))
    # the closing marker seals the ratio defect; an exact Q:1 block dies
    trans.append(Transition(grp(0), mark_a, (1,), BAD, (0,)))
    for j in range(1, q):
        for g in (0, 1):
            trans.append(Transition(grp(j), zero, (g,), grp((j + 1) % q),
                                    (0,)))
            trans.append(Transition(grp(j), mark_a, (g,), BAD, (0,)))
    trans.append(Transition("ovr", zero, (0,), "ovr", (0,)))
    trans.append(Transition("ovr", mark_a, (0,), BAD, (0,)))
    trans += _sink(BAD, full, 1)

    states = frozenset(["v0", "acnt0", "acnt", "bexp", "b0", "ovr", BAD]
                       + [grp(j) for j in range(q)])
    m = CounterMachine(k=1, states=states, alphabet=full, initial="v0",
                       transitions=tuple(trans))
    return BuchiAutomaton(machine=m, accepting=frozenset({BAD}))


def _pad_buchi(b: BuchiAutomaton, new_k: int) -> BuchiAutomaton:
    return BuchiAutomaton(pad_counters(b.machine, new_k), b.accepting)


def build_h_complement(sigma: frozenset[str] | set[str],
                       primes: tuple[int, ...]) -> BuchiAutomaton:
    """Union of the four defect acceptors; accepts exactly the non-images."""
    d1 = _pad_buchi(build_d1(sigma, primes), 1)
    d2 = _pad_buchi(build_d2(sigma, primes), 1)
    d3 = build_d3(sigma, primes)
    d4 = build_d4(sigma, primes)
    return union(union(union(d1, d2), d3), d4)
