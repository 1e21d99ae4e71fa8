"""Verification machinery over prefixes and lassos.

Positive evidence on non-periodic coded words is always a certificate or an
exact prefix closure; negative evidence is prefix-exact and tail-open,
except on 0-counter machines where lasso membership is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MachineError
from .machines import BuchiAutomaton, Configuration, is_real_time, step
from .words import LassoWord, lasso_prefix

DEFAULT_VISITED_CAP = 10 ** 7


@dataclass(frozen=True)
class PrefixReach:
    """frontiers[i]: configurations reachable after i letters, mapped to the
    maximum accepting-visit count (start included) over runs reaching them.
    Real-time machines only, so the closure is exact."""

    frontiers: tuple[dict, ...]
    capped: bool

    def sizes(self) -> list[int]:
        return [len(f) for f in self.frontiers]

    def max_visits(self, pos: int) -> int | None:
        f = self.frontiers[pos]
        return max(f.values()) if f else None

    def first_empty_position(self) -> int | None:
        for i, f in enumerate(self.frontiers):
            if not f:
                return i
        return None


def exact_prefix_reach(b: BuchiAutomaton, prefix: list[str] | tuple[str, ...],
                       visited_cap: int = DEFAULT_VISITED_CAP) -> PrefixReach:
    m = b.machine
    if not is_real_time(m):
        raise MachineError("exact_prefix_reach needs a real-time machine; use bounded_explore")
    start = Configuration(m.initial, (0,) * m.k)
    cur = {start: 1 if m.initial in b.accepting else 0}
    frontiers = [dict(cur)]
    total = len(cur)
    capped = False
    for a in prefix:
        nxt: dict[Configuration, int] = {}
        for cfg, visits in cur.items():
            for _, nc in step(m, cfg, a):
                nv = visits + (1 if nc.state in b.accepting else 0)
                old = nxt.get(nc)
                if old is None or nv > old:
                    nxt[nc] = nv
        total += len(nxt)
        if total > visited_cap:
            capped = True
            frontiers.append(nxt)
            break
        frontiers.append(nxt)
        cur = nxt
        if not cur:
            break
    # pad with empty frontiers for stable indexing when the search died early
    while len(frontiers) < len(prefix) + 1 and not capped:
        frontiers.append({})
    return PrefixReach(tuple(frontiers), capped)


@dataclass(frozen=True)
class ExploreEvidence:
    """Budgeted closure: frontiers[i] maps (configuration, lambda-steps used
    since the last letter) to max accepting visits.  exhausted means the
    closure completed under the visited cap, making negative results exact
    for the stated budget."""

    frontiers: tuple[dict, ...]
    exhausted: bool

    def configs_at(self, pos: int) -> set[Configuration]:
        return {cfg for (cfg, _l) in self.frontiers[pos]}

    def max_visits(self, pos: int | None = None) -> int | None:
        f = self.frontiers[-1 if pos is None else pos]
        return max(f.values()) if f else None

    def sizes(self) -> list[int]:
        return [len(f) for f in self.frontiers]


def bounded_explore(b: BuchiAutomaton, prefix: list[str] | tuple[str, ...],
                    lambda_budget: int,
                    visited_cap: int = DEFAULT_VISITED_CAP) -> ExploreEvidence:
    """Explore runs that take at most lambda_budget lambda-steps between
    consecutive letters (also before the first and after the last)."""
    m = b.machine

    def visit(state: str) -> int:
        return 1 if state in b.accepting else 0

    def close(level0: dict) -> dict:
        # lambda-closure: lam strictly increases, so levels form a DAG and a
        # single pass per level computes exact max visits
        out = dict(level0)
        level = level0
        for lam in range(1, lambda_budget + 1):
            nxt_level: dict = {}
            for (cfg, l), visits in level.items():
                for _, nc in step(m, cfg, None):
                    key = (nc, lam)
                    nv = visits + visit(nc.state)
                    old = out.get(key)
                    if old is None or nv > old:
                        nxt_level[key] = max(nv, nxt_level.get(key, nv))
                        out[key] = max(nv, out.get(key, nv))
            if not nxt_level:
                break
            level = nxt_level
        return out

    start = Configuration(m.initial, (0,) * m.k)
    cur = close({(start, 0): visit(m.initial)})
    frontiers = [cur]
    total = len(cur)
    exhausted = True
    for a in prefix:
        base: dict = {}
        for (cfg, _l), visits in cur.items():
            for _, nc in step(m, cfg, a):
                nv = visits + visit(nc.state)
                key = (nc, 0)
                old = base.get(key)
                if old is None or nv > old:
                    base[key] = nv
        cur = close(base)
        total += len(cur)
        frontiers.append(cur)
        if total > visited_cap:
            exhausted = False
            break
        if not cur:
            break
    while len(frontiers) < len(prefix) + 1 and exhausted:
        frontiers.append({})
    return ExploreEvidence(tuple(frontiers), exhausted)


def deterministic_run(b: BuchiAutomaton, prefix: list[str] | tuple[str, ...]) -> "Run":
    """Walk a prefix through a machine that is deterministic on it: exactly
    one transition may be enabled per letter.  Raises on 0 or >1 choices."""
    from .machines import Run, RunStep
    m = b.machine
    cfg = Configuration(m.initial, (0,) * m.k)
    steps = []
    for i, a in enumerate(prefix):
        succ = step(m, cfg, a)
        if len(succ) != 1:
            raise ValueError(f"position {i}: {len(succ)} enabled transitions on {a!r} at {cfg.state}")
        idx, cfg = succ[0]
        steps.append(RunStep(a, idx, cfg))
    return Run(Configuration(m.initial, (0,) * m.k), tuple(steps))


def nba_lasso_member(b: BuchiAutomaton, w: LassoWord) -> bool:
    """Exact Buchi membership of spoke.cycle^omega for 0-counter automata.

    Product graph: (state, word position), positions wrapping into the
    cycle.  Accepting iff some reachable strongly connected component
    contains an accepting state and an internal letter edge (a cycle made
    only of lambda edges consumes no input, so it never accepts)."""
    m = b.machine
    if m.k != 0:
        raise MachineError("lasso membership is exact only for k = 0")
    sp, cy = len(w.spoke), len(w.cycle)
    letters = list(w.spoke) + list(w.cycle)

    def succ(node):
        q, pos = node
        out = []
        a = letters[pos]
        nxt = pos + 1 if pos + 1 < sp + cy else sp
        for _, nc in step(m, Configuration(q, ()), a):
            out.append(((nc.state, nxt), True))
        for _, nc in step(m, Configuration(q, ()), None):
            out.append(((nc.state, pos), False))
        return out

    root = (m.initial, 0)
    # reachable node set
    seen = {root}
    stack = [root]
    while stack:
        n = stack.pop()
        for n2, _ in succ(n):
            if n2 not in seen:
                seen.add(n2)
                stack.append(n2)
    # iterative Tarjan over the reachable subgraph
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    scc_of: dict = {}
    tarjan_stack: list = []
    counter = [0]
    scc_id = [0]
    for start_node in seen:
        if start_node in index:
            continue
        work = [(start_node, iter(succ(start_node)))]
        index[start_node] = low[start_node] = counter[0]
        counter[0] += 1
        tarjan_stack.append(start_node)
        on_stack.add(start_node)
        while work:
            node, it = work[-1]
            advanced = False
            for n2, _ in it:
                if n2 not in index:
                    index[n2] = low[n2] = counter[0]
                    counter[0] += 1
                    tarjan_stack.append(n2)
                    on_stack.add(n2)
                    work.append((n2, iter(succ(n2))))
                    advanced = True
                    break
                elif n2 in on_stack:
                    low[node] = min(low[node], index[n2])
            if not advanced:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    while True:
                        n2 = tarjan_stack.pop()
                        on_stack.discard(n2)
                        scc_of[n2] = scc_id[0]
                        if n2 == node:
                            break
                    scc_id[0] += 1
    # an SCC is viable if it has an internal letter edge; accept if such an
    # SCC also holds an accepting state
    viable = set()
    for n in seen:
        for n2, is_letter in succ(n):
            # n2 in the same SCC means a cycle through this letter edge
            # exists (a singleton SCC only qualifies via a self-loop)
            if is_letter and scc_of[n] == scc_of[n2]:
                viable.add(scc_of[n])
    for (q, _pos) in seen:
        if q in b.accepting and scc_of[(q, _pos)] in viable:
            return True
    return False


@dataclass(frozen=True, slots=True)
class Witness:
    cls: str       # D3 | D4
    position: int  # 1-based start of the segment (its B or A)
    n: int
    m: int
    end: int       # 1-based position of the closing letter


def d34_witness_scan(w: LassoWord, Q: int, span: int | None = None,
                     marker_a: str = "A", marker_b: str = "B",
                     zero: str = "0") -> Witness | None:
    """First D3 (B.0^n.A.0^m.sigma, n != m) or D4 (A.0^n.sigma.B.0^m.A,
    m != Q n) segment, earliest completion first.

    With span=None the scan covers 3|spoke| + 5|cycle| + 8 letters, enough
    to host any witness: the first witness starts before |spoke| + |cycle|
    and 0-runs that ever close are shorter than |spoke| + 2|cycle|.  Pass a
    span to restrict the scan to a fixed prefix.
    """
    if span is None:
        span = 3 * len(w.spoke) + 5 * len(w.cycle) + 8
    y = lasso_prefix(w, span)
    reserved = {marker_a, marker_b, zero}

    def run_of_zeros(i: int) -> tuple[int, int]:
        n = 0
        while i < len(y) and y[i] == zero:
            n += 1
            i += 1
        return n, i

    best: Witness | None = None
    for p in range(len(y)):
        if y[p] == marker_b:
            n, i = run_of_zeros(p + 1)
            if n >= 1 and i < len(y) and y[i] == marker_a:
                m, i2 = run_of_zeros(i + 1)
                if m >= 1 and i2 < len(y) and y[i2] not in reserved:
                    if n != m:
                        cand = Witness("D3", p + 1, n, m, i2 + 1)
                        if best is None or cand.end < best.end:
                            best = cand
        elif y[p] == marker_a:
            n, i = run_of_zeros(p + 1)
            if n >= 1 and i < len(y) and y[i] not in reserved:
                if i + 1 < len(y) and y[i + 1] == marker_b:
                    m, i2 = run_of_zeros(i + 2)
                    if m >= 1 and i2 < len(y) and y[i2] == marker_a:
                        if m != Q * n:
                            cand = Witness("D4", p + 1, n, m, i2 + 1)
                            if best is None or cand.end < best.end:
                                best = cand
    return best
