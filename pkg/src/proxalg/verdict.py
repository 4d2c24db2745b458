from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Optional

STATUSES = ("pass", "fail", "error", "undecidable")


@dataclass
class Verdict:
    status: str
    axiom_id: Optional[str] = None
    counterexample: Any = None
    seed: int = 0
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.status == "fail" and self.counterexample is None:
            raise ValueError("a failing verdict needs a counterexample")

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"status": self.status, "axiom_id": self.axiom_id,
                "counterexample": self.counterexample, "seed": self.seed,
                "stats": self.stats}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class Failure(Exception):
    """Internal signal carrying the first violated axiom and its witness."""

    def __init__(self, axiom: str, counterexample: Any):
        super().__init__(axiom)
        self.axiom = axiom
        self.counterexample = counterexample


class InputError(ValueError):
    """Malformed or inconsistent input data."""


class UndecidableAtDeskScale(Exception):
    """The requested value is an infinite join that the finite procedure cannot settle."""
