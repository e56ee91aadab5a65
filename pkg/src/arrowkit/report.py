"""JSON reports emitted by every CLI subcommand.

Field order is fixed by construction, so two runs over the same input give
byte-identical output once timings are left out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .laws import LawReport, Verdict


@dataclass
class Section:
    """Verdicts and data about one subject (an algebra, a nucleus, a term...)."""

    subject: str
    verdicts: list[Verdict] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def extend(self, laws: LawReport, prefix: str = "") -> None:
        for v in laws.verdicts:
            self.verdicts.append(Verdict(prefix + v.law, v.ok, v.witness, v.checked))

    def add(self, law: str, ok: bool, witness: dict[str, Any] | None = None, checked: int = 0) -> None:
        self.verdicts.append(Verdict(law, ok, None if ok else witness, checked))

    def to_json(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "verdicts": [v.to_json() for v in self.verdicts],
            "data": self.data,
        }

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Section":
        return cls(data["subject"], [Verdict.from_json(v) for v in data["verdicts"]], data["data"])


@dataclass
class Report:
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    sections: list[Section] = field(default_factory=list)
    timings: dict[str, float] | None = field(default_factory=dict)
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.sections)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def section(self, subject: str) -> Section:
        s = Section(subject)
        self.sections.append(s)
        return s

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "tool": "arrowkit",
            "version": self.version,
            "command": self.command,
            "inputs": self.inputs,
            "ok": self.ok,
            "sections": [s.to_json() for s in self.sections],
        }
        if self.timings is not None:
            out["timings"] = self.timings
        return out

    @classmethod
    def from_json(cls, data: dict[str, Any]) -> "Report":
        return cls(
            data["command"],
            data["inputs"],
            [Section.from_json(s) for s in data["sections"]],
            data.get("timings"),
            data["version"],
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Report":
        return cls.from_json(json.loads(text))
