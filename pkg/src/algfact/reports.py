from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    """Where a check failed: which identity, on which basis tuple."""

    axiom: str
    args: tuple
    lhs: dict
    rhs: dict
    order: int | None = None


@dataclass
class Report:
    check: str
    ok: bool
    witness: Witness | None = None
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "PASS" if self.ok else "FAIL"

    def __bool__(self) -> bool:
        return self.ok
