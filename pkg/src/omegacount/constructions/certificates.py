"""Run certificates: a run plus stage and block annotations.

The block spans index into run.steps and say which coded block each step
serves, so acceptance transfer can be checked block by block.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..machines import Run, buchi_visit_count


@dataclass(frozen=True, slots=True)
class BlockSpan:
    """Steps start..end (half-open, 0-based into run.steps) serve block
    `index` (1-based coded block)."""

    index: int
    start: int
    end: int


@dataclass(frozen=True, slots=True)
class RunCertificate:
    run: Run
    stage: str
    blocks: tuple[BlockSpan, ...]

    def block_visits(self, accepting) -> dict[int, int]:
        """Accepting visits per block index (start configuration uncounted)."""
        out = {}
        for b in self.blocks:
            n = sum(1 for s in self.run.steps[b.start:b.end]
                    if s.result.state in accepting)
            out[b.index] = n
        return out

    def visits(self, accepting) -> int:
        return buchi_visit_count(self.run, accepting)
