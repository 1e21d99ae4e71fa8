"""Reachability, deterministic walks, lasso membership, witness scans."""

import pytest
from hypothesis import given, settings, strategies as st

from omegacount.engine import (bounded_explore, d34_witness_scan,
                               deterministic_run, exact_prefix_reach,
                               nba_lasso_member)
from omegacount.machines import (BuchiAutomaton, Configuration, CounterMachine,
                                 MachineError, Transition, validate_run)
from omegacount.words import LassoWord
from conftest import lasso_member_oracle, m1_aomega, m2_two_counters


def test_exact_prefix_reach_counts_configurations():
    b = m2_two_counters()
    r = exact_prefix_reach(b, ["a", "a", "b", "b"])
    # deterministic machine: single configuration per position
    assert r.sizes() == [1, 1, 1, 1, 1]
    assert not r.capped
    # two b's at q, accepting; start and a's are not
    assert r.max_visits(4) == 2
    assert r.first_empty_position() is None


def test_exact_prefix_reach_dies_on_impossible_letter():
    b = m2_two_counters()
    r = exact_prefix_reach(b, ["b", "a"])
    assert r.sizes() == [1, 0, 0]
    assert r.first_empty_position() == 1


def test_exact_prefix_reach_rejects_lambda_machines():
    m = CounterMachine(k=1, alphabet=frozenset({"a"}), states=("p",),
                       initial="p",
                       transitions=(Transition("p", None, (0,), "p", (0,)),))
    with pytest.raises(MachineError):
        exact_prefix_reach(BuchiAutomaton(m, frozenset()), ["a"])


def test_exact_prefix_reach_tracks_nondeterministic_branching():
    # two a-successors from the initial state, one accepting
    m = CounterMachine(k=0, alphabet=frozenset({"a"}),
                       states=("p", "q", "r"), initial="p",
                       transitions=(Transition("p", "a", (), "q", ()),
                                    Transition("p", "a", (), "r", ()),
                                    Transition("q", "a", (), "q", ()),
                                    Transition("r", "a", (), "r", ())))
    b = BuchiAutomaton(m, frozenset({"q"}))
    r = exact_prefix_reach(b, ["a", "a"])
    assert r.sizes() == [1, 2, 2]
    assert r.max_visits(2) == 2


def test_bounded_explore_uses_lambda_budget():
    # one lambda hop is needed to reach the state that reads a
    m = CounterMachine(k=0, alphabet=frozenset({"a"}),
                       states=("p", "q"), initial="p",
                       transitions=(Transition("p", None, (), "q", ()),
                                    Transition("q", "a", (), "q", ())))
    b = BuchiAutomaton(m, frozenset({"q"}))
    dead = bounded_explore(b, ["a"], lambda_budget=0)
    assert dead.sizes()[-1] == 0
    live = bounded_explore(b, ["a"], lambda_budget=1)
    assert Configuration("q", ()) in live.configs_at(1)
    assert live.exhausted
    assert live.max_visits() == 2  # lambda entry plus the read


def test_deterministic_run_walks_and_rejects_choice():
    b = m2_two_counters()
    run = deterministic_run(b, ["a", "a", "b"])
    assert validate_run(b.machine, ["a", "a", "b"], run) is None
    assert run.steps[-1].result == Configuration("q", (2, 1))
    m = CounterMachine(k=0, alphabet=frozenset({"a"}),
                       states=("p", "q"), initial="p",
                       transitions=(Transition("p", "a", (), "p", ()),
                                    Transition("p", "a", (), "q", ())))
    with pytest.raises(ValueError):
        deterministic_run(BuchiAutomaton(m, frozenset()), ["a"])


def test_nba_lasso_member_requires_k0():
    with pytest.raises(MachineError):
        nba_lasso_member(m1_aomega(), LassoWord((), ("a",), frozenset({"a"})))


@st.composite
def k0_and_lasso(draw):
    n = draw(st.integers(1, 3))
    states = tuple(f"s{i}" for i in range(n))
    trans = []
    for src in states:
        for a in ("a", "b"):
            for dst in states:
                if draw(st.booleans()):
                    trans.append(Transition(src, a, (), dst, ()))
    accepting = frozenset(s for s in states if draw(st.booleans()))
    m = CounterMachine(k=0, alphabet=frozenset({"a", "b"}), states=states,
                       initial="s0", transitions=tuple(trans))
    spoke = tuple(draw(st.lists(st.sampled_from(["a", "b"]), max_size=3)))
    cycle = tuple(draw(st.lists(st.sampled_from(["a", "b"]), min_size=1,
                                max_size=4)))
    return BuchiAutomaton(m, accepting), spoke, cycle


@settings(max_examples=120, deadline=None)
@given(k0_and_lasso())
def test_nba_lasso_member_matches_oracle(case):
    b, spoke, cycle = case
    w = LassoWord(spoke, cycle, frozenset({"a", "b"}))
    assert nba_lasso_member(b, w) is lasso_member_oracle(b, spoke, cycle)


def _lasso(*letters, cycle):
    return LassoWord(tuple(letters), tuple(cycle), frozenset("abAB0"))


def test_d34_scan_finds_d3():
    # ratio of the enclosing block is exact (6 = Q*1), so only D3 fires
    spoke = tuple("A") + ("0",) + ("a", "B") + ("0",) * 6 + ("A",) + ("0",) * 2 + ("b",)
    w = _lasso(*spoke, cycle=("0",))
    hit = d34_witness_scan(w, 6)
    assert hit is not None and hit.cls == "D3"
    assert (hit.n, hit.m) == (6, 2)
    assert hit.position == 4 and hit.end == 14


def test_d34_scan_finds_d4():
    spoke = tuple("A") + ("0",) * 2 + ("a", "B") + ("0",) * 5 + ("A",)
    w = _lasso(*spoke, cycle=("0",))
    hit = d34_witness_scan(w, 6)
    assert hit is not None and hit.cls == "D4"
    assert (hit.n, hit.m) == (2, 5)
    assert hit.end == 11


def test_d34_scan_accepts_exact_ratio():
    # m = Q n is not a D4 witness; equal runs are not D3 witnesses
    spoke = tuple("A") + ("0",) * 1 + ("a", "B") + ("0",) * 6 + ("A",)
    w = _lasso(*spoke, cycle=("0",))
    assert d34_witness_scan(w, 6) is None


def test_d34_scan_sees_witness_inside_cycle_unrolling():
    # the B...A...sigma segment only appears once the cycle wraps
    w = LassoWord(("B",), ("0", "A", "0", "0", "a"), frozenset("aAB0"))
    hit = d34_witness_scan(w, 6)
    assert hit is not None and hit.cls == "D3"
