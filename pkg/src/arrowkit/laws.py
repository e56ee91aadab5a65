"""Law verdicts: named pass/fail outcomes with a witness for the first failure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import ArrowkitError


@dataclass
class Verdict:
    law: str
    ok: bool
    witness: dict[str, Any] | None = None
    checked: int = 0

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"law": self.law, "ok": self.ok, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Verdict":
        return cls(data["law"], data["ok"], data.get("witness"), data.get("checked", 0))


@dataclass
class LawReport:
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.ok]

    def __getitem__(self, law: str) -> Verdict:
        for v in self.verdicts:
            if v.law == law:
                return v
        raise KeyError(law)

    def add(self, law: str, ok: bool, witness: dict[str, Any] | None = None, checked: int = 0) -> Verdict:
        v = Verdict(law, ok, None if ok else witness, checked)
        self.verdicts.append(v)
        return v

    def extend(self, other: "LawReport", prefix: str = "") -> None:
        for v in other.verdicts:
            self.verdicts.append(Verdict(prefix + v.law, v.ok, v.witness, v.checked))

    def raise_if_failed(self, exc: type[ArrowkitError]) -> None:
        bad = self.failures
        if bad:
            raise exc(f"law {bad[0].law} fails", law=bad[0].law, **(bad[0].witness or {}))


class Scan:
    """Record the first counterexample of a named law over an enumeration."""

    def __init__(self, report: LawReport, law: str) -> None:
        self.report = report
        self.law = law
        self.count = 0
        self.witness: dict[str, Any] | None = None

    def check(self, ok: bool, **witness: Any) -> bool:
        self.count += 1
        if not ok and self.witness is None:
            self.witness = witness
        return ok

    def done(self) -> Verdict:
        return self.report.add(self.law, self.witness is None, self.witness, self.count)


def all_of(report: LawReport, law: str, cases: Iterable[tuple[bool, dict[str, Any]]]) -> Verdict:
    scan = Scan(report, law)
    for ok, witness in cases:
        if not scan.check(ok, **witness):
            break
    return scan.done()
