"""Structured check results.

Every report names its check, the universe it was run on, a status, and the
witnesses behind a failure (or behind a decision, where one was reached).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"
REFUSED = "refused"

MAX_WITNESSES = 20


@dataclass
class Report:
    check: str
    universe: Dict[str, Any] = field(default_factory=dict)
    status: str = PASS
    witnesses: List[Any] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def fail(self, witness=None):
        self.status = FAIL
        if witness is not None and len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(witness)
        return self

    def note(self, **kw):
        self.details.update(kw)
        return self

    def absorb(self, sub: "Report", key: str = None):
        """Attach a sub-report; a failing or unknown sub-report degrades this one."""
        self.details.setdefault("subchecks", []).append(sub.to_dict() if key is None else {key: sub.to_dict()})
        if sub.status == FAIL:
            self.status = FAIL
            for w in sub.witnesses[:3]:
                if len(self.witnesses) < MAX_WITNESSES:
                    self.witnesses.append({"from": sub.check, "witness": w})
        elif sub.status == UNKNOWN and self.status == PASS:
            self.status = UNKNOWN
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "universe": self.universe,
            "status": self.status,
            "witnesses": self.witnesses,
            **({"details": self.details} if self.details else {}),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    def summary(self) -> str:
        return f"{self.check}: {self.status}"
