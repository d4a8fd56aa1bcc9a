"""Plain-text check reports with a porcelain (key=value) variant."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


@dataclass
class Record:
    name: str
    status: str
    witness: str = ""


@dataclass
class Report:
    command: str
    records: list[Record] = field(default_factory=list)
    info: list[tuple[str, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness: str = "") -> bool:
        self.records.append(Record(name, PASS if ok else FAIL, witness))
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.records.append(Record(name, SKIP, reason))

    def note(self, key: str, value) -> None:
        self.info.append((key, str(value)))

    @property
    def ok(self) -> bool:
        # skipped records do not fail the report
        return all(r.status != FAIL for r in self.records)

    def render(self, porcelain: bool = False) -> str:
        if porcelain:
            lines = [f"command={self.command}"]
            lines += [f"info.{k}={v}" for k, v in self.info]
            for r in self.records:
                w = r.witness.replace("\n", "\\n")
                lines.append(f"check={r.name} status={r.status.lower()}" + (f" witness={w}" if w else ""))
            lines.append(f"overall={'pass' if self.ok else 'fail'}")
            return "\n".join(lines) + "\n"
        lines = [f"$ {self.command}"]
        lines += [f"{k}: {v}" for k, v in self.info]
        for r in self.records:
            lines.append(f"CHECK {r.name}: {r.status}")
            if r.witness and (r.status != PASS or r.witness.startswith("transcript")):
                lines += ["    " + w for w in r.witness.splitlines()]
        lines.append(f"OVERALL: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"
