"""Outcome values shared by every checker, and the resource caps."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterable, Optional, Tuple


class Status(str, enum.Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    UNKNOWN = "UNKNOWN"
    SKIPPED = "SKIPPED"
    INCONSISTENT = "INCONSISTENT"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """A three-valued (plus gating/inconsistency) outcome with evidence.

    ``FAILS`` always carries a witness and ``UNKNOWN`` always names the cap
    that was hit; the constructors below enforce this.
    """

    status: Status
    witness: Optional[Dict[str, Any]] = None
    caps_hit: Tuple[str, ...] = ()
    detail: str = ""
    evidence: Optional[Dict[str, Any]] = None

    def __post_init__(self):
        if self.status is Status.FAILS and self.witness is None:
            raise ValueError("a FAILS verdict needs a witness")
        if self.status is Status.UNKNOWN and not self.caps_hit:
            raise ValueError("an UNKNOWN verdict needs the cap that was hit")

    @classmethod
    def holds(cls, detail: str = "", evidence=None) -> "Verdict":
        return cls(Status.HOLDS, detail=detail, evidence=evidence)

    @classmethod
    def fails(cls, witness: Dict[str, Any], detail: str = "") -> "Verdict":
        return cls(Status.FAILS, witness=witness, detail=detail)

    @classmethod
    def unknown(cls, cap: str, detail: str = "") -> "Verdict":
        return cls(Status.UNKNOWN, caps_hit=(cap,), detail=detail)

    @classmethod
    def skipped(cls, witness: Dict[str, Any], detail: str = "") -> "Verdict":
        return cls(Status.SKIPPED, witness=witness, detail=detail)

    @classmethod
    def inconsistent(cls, witness: Dict[str, Any], detail: str = "") -> "Verdict":
        return cls(Status.INCONSISTENT, witness=witness, detail=detail)

    @property
    def ok(self) -> bool:
        return self.status is Status.HOLDS

    def __bool__(self):  # pragma: no cover - guard against accidental truthiness
        raise TypeError("use .ok or .status on a Verdict")

    def to_json(self) -> dict:
        out: Dict[str, Any] = {"status": self.status.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.caps_hit:
            out["caps_hit"] = list(self.caps_hit)
        if self.detail:
            out["detail"] = self.detail
        if self.evidence is not None:
            out["evidence"] = self.evidence
        return out

    @classmethod
    def from_json(cls, d: dict) -> "Verdict":
        return cls(Status(d["status"]), d.get("witness"), tuple(d.get("caps_hit", ())),
                   d.get("detail", ""), d.get("evidence"))


def combine(verdicts: Iterable[Verdict], detail: str = "") -> Verdict:
    """Logical AND; the first non-HOLDS verdict (in iteration order) wins.

    Precedence: INCONSISTENT > FAILS > UNKNOWN.  SKIPPED entries are ignored.
    """
    first = {}
    for v in verdicts:
        first.setdefault(v.status, v)
    for s in (Status.INCONSISTENT, Status.FAILS, Status.UNKNOWN):
        if s in first:
            v = first[s]
            return replace(v, detail=detail or v.detail)
    return Verdict.holds(detail)


@dataclass(frozen=True)
class Caps:
    """Search and enumeration limits.  Reports embed these values."""

    enum_cap: int = 2 ** 20          # elements tried in an exhaustive Hom/End search
    subset_limit: int = 12           # max indecomposables for pair enumeration
    mult_bound: int = 2              # multiplicity bound in approximation search
    dim_slack: int = 8               # total-dimension slack in approximation search
    sample_cap: int = 4096           # classes per Ext group in sweeps
    naturality_cap: int = 64         # morphisms per Hom space in naturality sweeps
    seed: int = 0

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


class CapExceeded(RuntimeError):
    """Raised internally when a search cap is reached; converted to UNKNOWN."""

    def __init__(self, cap: str, detail: str = ""):
        super().__init__(f"{cap}: {detail}")
        self.cap = cap
        self.detail = detail


DEFAULT_CAPS = Caps()
