"""End-to-end chain: pad-code the input language, compile to one counter,
wrap the lambda moves away.

Stage 1 compiles a 2-counter machine to the 8-counter pad-coded acceptor,
stage 2 takes the union of its block-coded 1-counter form with the coding
defect acceptor, stage 3 hides the remaining lambda bursts behind a filler
cadence.  With the default eight primes the block lengths make stage 2's
control astronomically large, so that call fails with the honest size
estimate; desk-scale work passes primes=(2, 3) and skip_realtime8=True to
run stages 2-3 on a 2-counter input directly, which exercises the same
code paths at tractable block sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ArityError, BuildScaleError, FreshLetterError
from ..machines import (BuchiAutomaton, Configuration, MachineError, Run,
                        RunStep, lift_run_union, union)
from ..words import FIRST_EIGHT_PRIMES, HCoding, PhiCoding, ThetaCoding
from .certificates import RunCertificate
from .complement import build_h_complement
from .phi import build_phi_wrapper, lift_run_phi
from .realtime8 import build_realtime8, lift_run_theta
from .script_l import build_script_L, lift_run_script_L


@dataclass(frozen=True, slots=True)
class PipelineOutput:
    """Final acceptor plus the word-coding chain and per-stage record.

    word_transform lists the coding objects to apply left to right;
    provenance holds (stage name, parameters, automaton) triples, starting
    with the untouched input.
    """

    automaton: BuchiAutomaton
    word_transform: tuple
    provenance: tuple

    def stage(self, name: str):
        for entry in self.provenance:
            if entry[0] == name:
                return entry
        raise KeyError(name)


def _staged(name: str, fn):
    try:
        return fn()
    except BuildScaleError as e:
        raise BuildScaleError(f"stage {name}: {e.args[0]}",
                              e.estimated_states, e.cap) from e
    except (ArityError, FreshLetterError) as e:
        raise type(e)(f"stage {name}: {e}") from e
    except MachineError as e:
        raise MachineError(f"stage {name}: {e}") from e


def compose_pipeline(a: BuchiAutomaton,
                     primes: tuple[int, ...] | None = None,
                     skip_realtime8: bool = False) -> PipelineOutput:
    """Chain the three builders over a 2-counter input machine.

    skip_realtime8 feeds the input to stage 2 directly (its counter count
    must then match len(primes)); otherwise stage 1 runs first and stage 2
    sees the 8-counter machine.
    """
    primes = FIRST_EIGHT_PRIMES if primes is None else tuple(primes)
    q = math.prod(primes)
    reserved = ["A", "B", "0", "F"] + ([] if skip_realtime8 else ["E"])
    clash = sorted(set(reserved) & a.machine.alphabet)
    if clash:
        raise FreshLetterError(f"input alphabet already uses {clash}")

    provenance: list[tuple] = [("input", {}, a)]
    transform: list = []
    if skip_realtime8:
        a_coded = a
    else:
        s_val, a_coded = _staged("realtime8", lambda: build_realtime8(a))
        provenance.append(("realtime8", {"S": s_val}, a_coded))
        transform.append(ThetaCoding(s_val))

    b_main = _staged("script-l", lambda: build_script_L(a_coded, primes))
    provenance.append(("script-l", {"primes": primes}, b_main))
    b_defect = _staged("h-complement", lambda: build_h_complement(
        a_coded.machine.alphabet, primes))
    provenance.append(("h-complement", {"primes": primes}, b_defect))
    transform.append(HCoding(primes))

    b_union = _staged("union", lambda: union(b_main, b_defect))
    provenance.append(("union", {}, b_union))

    out = _staged("phi-wrapper", lambda: build_phi_wrapper(b_union, q - 1))
    provenance.append(("phi-wrapper", {"filler_count": q - 1}, out))
    transform.append(PhiCoding(q - 1))

    return PipelineOutput(automaton=out, word_transform=tuple(transform),
                          provenance=tuple(provenance))


def _from_union_initial(b1: BuchiAutomaton, b2: BuchiAutomaton,
                        run: Run, side: str) -> Run:
    """Re-route a retagged side run so it starts at the union's own initial
    state, using the branch copy of its first transition."""
    m1, m2 = b1.machine, b2.machine
    tag, mach, before = ("L", m1, 0) if side == "left" else ("R", m2, 1)
    if run.start.state != f"{tag}.{mach.initial}":
        raise MachineError("side run must start at its machine's initial state")
    start = Configuration("u0", run.start.counters)
    if not run.steps:
        return Run(start, ())
    base = len(m1.transitions) + len(m2.transitions)
    if before:
        base += sum(1 for t in m1.transitions if t.source == m1.initial)
    first = run.steps[0]
    orig = first.transition_index - (0 if side == "left" else len(m1.transitions))
    rank = sum(1 for t in mach.transitions[:orig] if t.source == mach.initial)
    hopped = RunStep(first.consumed, base + rank, first.result)
    return Run(start, (hopped,) + run.steps[1:])


def lift_run_pipeline(out: PipelineOutput, run: Run,
                      prefix_len: int | None = None) -> RunCertificate:
    """Compose the stage lifts: the input run becomes a validated run of
    the final one-counter wrapper, block-annotated by the coded blocks of
    the middle stage.  prefix_len counts letters of the outermost coding."""
    a = out.stage("input")[2]
    primes = out.stage("script-l")[1]["primes"]
    b_main = out.stage("script-l")[2]
    b_defect = out.stage("h-complement")[2]
    filler_count = out.stage("phi-wrapper")[1]["filler_count"]

    src = run
    try:
        r8 = out.stage("realtime8")
    except KeyError:
        r8 = None
    coded_from = a
    if r8 is not None:
        cert0 = lift_run_theta(a, run, s_override=r8[1]["S"])
        src = cert0.run
        coded_from = r8[2]

    cert1 = lift_run_script_L(coded_from, primes, src)
    u_run = _from_union_initial(b_main, b_defect,
                                lift_run_union(b_main, b_defect, cert1.run, "left"),
                                "left")
    b_union = out.stage("union")[2]
    cert2 = lift_run_phi(b_union, filler_count, u_run,
                         prefix_len=prefix_len, blocks=cert1.blocks)
    return RunCertificate(run=cert2.run, stage="pipeline", blocks=cert2.blocks)
