"""Analyzer abstraction: verdicts, run records, and analyzer specs."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum


class Verdict(Enum):
    SAFE = "safe"  # the assertion cannot fail
    UNSAFE = "unsafe"  # the assertion can fail
    UNKNOWN = "unknown"

    @classmethod
    def from_name(cls, name: str) -> "Verdict":
        for v in cls:
            if v.value == name:
                return v
        raise ValueError(f"unknown verdict {name!r}")


class RunStatus(Enum):
    COMPLETED = "completed"
    TIMEOUT = "timeout"
    CRASH = "crash"
    RESOURCE_EXCEEDED = "resource-exceeded"


@dataclass(frozen=True)
class VerdictRule:
    """Regex over combined stdout+stderr; first matching rule wins."""

    pattern: str
    verdict: Verdict


@dataclass(frozen=True)
class ResourceLimits:
    time_s: float = 30.0
    memory_bytes: int = 8 * 1024**3
    cores: int = 2


@dataclass(frozen=True)
class AnalyzerSpec:
    """One analyzer: either an external command or a named built-in.

    An under-approximating analyzer's unsafe verdicts are trusted as ground
    truth by the detector (its safe verdicts are not).
    """

    id: str
    kind: str  # 'external' | 'builtin'
    under_approximating: bool = False
    command_template: str = ""  # external: tokens with {input_file}
    verdict_rules: tuple[VerdictRule, ...] = ()
    exit_codes: dict[int, Verdict] = field(default_factory=dict)
    limits: ResourceLimits = field(default_factory=ResourceLimits)
    builtin: str = ""  # builtin: registry name
    options: dict = field(default_factory=dict)  # builtin configuration

    def __post_init__(self) -> None:
        if self.kind not in ("external", "builtin"):
            raise ValueError(f"analyzer kind must be external or builtin, got {self.kind!r}")
        if self.kind == "external" and not self.command_template:
            raise ValueError(f"external analyzer {self.id!r} needs a command template")
        if self.kind == "builtin" and not self.builtin:
            raise ValueError(f"builtin analyzer {self.id!r} needs a builtin name")

    def config_digest(self) -> str:
        """Digest of everything that affects this analyzer's results."""
        payload = {
            "kind": self.kind,
            "under_approximating": self.under_approximating,
            "command_template": self.command_template,
            "verdict_rules": [(r.pattern, r.verdict.value) for r in self.verdict_rules],
            "exit_codes": {str(k): v.value for k, v in sorted(self.exit_codes.items())},
            "limits": [self.limits.time_s, self.limits.memory_bytes, self.limits.cores],
            "builtin": self.builtin,
            "options": self.options,
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AnalyzerRun:
    """Outcome of one analyzer on one variant, with telemetry."""

    analyzer_id: str
    variant_hash: str
    verdict: Verdict
    status: RunStatus = RunStatus.COMPLETED
    wall_ms: float = 0.0
    peak_memory_bytes: int = 0
    output: str = ""

    def __post_init__(self) -> None:
        if self.status is not RunStatus.COMPLETED and self.verdict is not Verdict.UNKNOWN:
            raise ValueError("non-completed runs must report unknown")
