"""Three-valued verdicts shared by the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

HOLDS = "holds-on-window"
FAILS = "fails-with-witness"
INCONCLUSIVE = "inconclusive"

EXIT_CODES = {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2}


@dataclass(frozen=True)
class Verdict:
    verdict: str
    window: int | None = None
    witness: Any = None
    basis: str = "window"  # "window", "exact" or "tag"
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in EXIT_CODES:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    @property
    def fails(self) -> bool:
        return self.verdict == FAILS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_json(self, encode=None) -> dict:
        w = self.witness
        if encode is not None and w is not None:
            w = encode(w)
        out = {"verdict": self.verdict, "window": self.window, "witness": w}
        if self.basis != "window":
            out["basis"] = self.basis
        return out
