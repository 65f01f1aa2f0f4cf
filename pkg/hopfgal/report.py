"""Check records, suite reports and their on-disk form (report-v1)."""

from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
import hashlib
import json
from typing import Iterable, List, Optional

SCHEMA = "report-v1"
WITNESS_LIMIT = 400


@dataclass
class Check:
    check: str
    preset: str
    parameters: dict = field(default_factory=dict)
    passed: bool = True
    witness: str = ""

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "preset": self.preset,
            "parameters": self.parameters,
            "pass": self.passed,
            "witness": self.witness,
        }


def _text(value) -> str:
    to_text = getattr(value, "to_text", None)
    text = to_text() if callable(to_text) else str(value)
    if len(text) > WITNESS_LIMIT:
        text = text[:WITNESS_LIMIT] + "..."
    return text


def check_equal(check: str, preset: str, left, right, parameters: Optional[dict] = None) -> Check:
    """Exact equality check; the witness shows both sides on failure."""
    ok = left == right
    witness = "" if ok else f"{_text(left)} != {_text(right)}"
    return Check(check, preset, dict(parameters or {}), bool(ok), witness)


def check_true(check: str, preset: str, ok: bool, witness: str = "", parameters: Optional[dict] = None) -> Check:
    return Check(check, preset, dict(parameters or {}), bool(ok), "" if ok else witness)


def all_passed(checks: Iterable[Check]) -> bool:
    return all(c.passed for c in checks)


def build_report(suite: str, preset: str, config: dict, checks: List[Check]) -> dict:
    return {
        "schema": SCHEMA,
        "suite": suite,
        "preset": preset,
        "config": config,
        "checks": [c.to_dict() for c in checks],
        "pass": all_passed(checks),
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def render_text(report: dict) -> str:
    lines = []
    for c in report["checks"]:
        tag = "PASS" if c["pass"] else "FAIL"
        line = f"{tag} {c['check']}"
        if c["witness"]:
            line += f": {c['witness']}"
        lines.append(line)
    lines.append(f"{'PASS' if report['pass'] else 'FAIL'} {report['suite']} {report['preset']}")
    return "\n".join(lines)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_report(out: Path, report: dict, extra_files: Iterable[Path] = ()) -> Path:
    """Write ``<suite>-<preset>.json`` and refresh ``checksums.sha256`` in ``out``."""
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{report['suite']}-{report['preset']}.json"
    path.write_text(dumps(report) + "\n")
    names = {p.name for p in out.glob("*.json")}
    names.update(Path(p).name for p in extra_files)
    with (out / "checksums.sha256").open("w") as f:
        for name in sorted(names):
            f.write(f"{_sha256(out / name)}  {name}\n")
    return path
