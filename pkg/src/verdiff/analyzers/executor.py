"""Uniform analyzer execution.

Built-ins run in process; external analyzers run as subprocesses under
resource limits, with the variant source materialized to a temp file that
is substituted for the {input_file} placeholder in the command template.
Process output (stdout+stderr) is classified by the spec's ordered regex
rules, then by the exit-code map, defaulting to unknown.

A crash or timeout of an external analyzer is not an error: it yields a
run with the corresponding status and an unknown verdict.  Adapter
misconfiguration (an unresolvable placeholder) is a hard error.
"""

from __future__ import annotations

import os
import re
import resource
import shlex
import signal
import subprocess
import tempfile
import time
from pathlib import Path

from ..synth.synthesize import Variant
from .registry import get_builtin
from .verdicts import AnalyzerRun, AnalyzerSpec, RunStatus, Verdict

OUTPUT_CAP = 64 * 1024  # stored per run; keeps the result store bounded


class AdapterConfigError(Exception):
    """The analyzer spec cannot be executed as configured."""


def _substitute_command(template: str, input_file: str) -> list[str]:
    tokens = shlex.split(template)
    substituted = []
    for tok in tokens:
        try:
            substituted.append(tok.format(input_file=input_file))
        except (KeyError, IndexError) as e:
            raise AdapterConfigError(
                f"unresolvable placeholder in command template {template!r}: {e}"
            ) from None
    if not substituted:
        raise AdapterConfigError("empty command template")
    return substituted


def classify_output(spec: AnalyzerSpec, output: str, returncode: int | None) -> Verdict:
    for rule in spec.verdict_rules:
        if re.search(rule.pattern, output, re.MULTILINE):
            return rule.verdict
    if returncode is not None and returncode in spec.exit_codes:
        return spec.exit_codes[returncode]
    return Verdict.UNKNOWN


def _make_preexec(spec: AnalyzerSpec):
    limits = spec.limits

    def preexec() -> None:
        if limits.memory_bytes:
            resource.setrlimit(resource.RLIMIT_AS, (limits.memory_bytes, limits.memory_bytes))
        if limits.time_s:
            cpu_s = int(limits.time_s * max(limits.cores, 1)) + 1
            resource.setrlimit(resource.RLIMIT_CPU, (cpu_s, cpu_s))
        if limits.cores and hasattr(os, "sched_setaffinity"):
            available = sorted(os.sched_getaffinity(0))
            os.sched_setaffinity(0, set(available[: limits.cores]))
        os.setsid()  # own process group so the whole tree can be killed

    return preexec


def run_external(spec: AnalyzerSpec, variant: Variant) -> AnalyzerRun:
    with tempfile.TemporaryDirectory(prefix="verdiff-run-") as tmp:
        input_file = Path(tmp) / "variant.c"
        input_file.write_text(variant.program.source_text, encoding="utf-8")
        argv = _substitute_command(spec.command_template, str(input_file))
        start = time.monotonic()
        rusage_before = resource.getrusage(resource.RUSAGE_CHILDREN)
        returncode: int | None = None
        try:
            proc = subprocess.Popen(
                argv,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                errors="replace",
                preexec_fn=_make_preexec(spec),
            )
        except OSError as e:
            return AnalyzerRun(
                analyzer_id=spec.id,
                variant_hash=variant.variant_hash,
                verdict=Verdict.UNKNOWN,
                status=RunStatus.CRASH,
                wall_ms=(time.monotonic() - start) * 1000,
                peak_memory_bytes=0,
                output=f"failed to execute: {e}"[:OUTPUT_CAP],
            )
        try:
            out, err = proc.communicate(timeout=spec.limits.time_s)
            status = RunStatus.COMPLETED
            returncode = proc.returncode
            if proc.returncode < 0:
                sig = -proc.returncode
                status = (
                    RunStatus.RESOURCE_EXCEEDED
                    if sig in (signal.SIGXCPU, signal.SIGKILL)
                    else RunStatus.CRASH
                )
        except subprocess.TimeoutExpired:
            try:
                os.killpg(proc.pid, signal.SIGKILL)  # setsid: pgid == pid
            except (ProcessLookupError, PermissionError):
                proc.kill()
            out, err = proc.communicate()
            status = RunStatus.TIMEOUT
        wall_ms = (time.monotonic() - start) * 1000
        output = ((out or "") + (err or ""))[:OUTPUT_CAP]
        rusage_after = resource.getrusage(resource.RUSAGE_CHILDREN)
        # Best effort: ru_maxrss is a high watermark over all reaped
        # children, so it only reflects this run when it grew.
        grew = rusage_after.ru_maxrss > rusage_before.ru_maxrss
        peak = rusage_after.ru_maxrss * 1024 if grew else 0
        verdict = (
            classify_output(spec, output, returncode)
            if status is RunStatus.COMPLETED
            else Verdict.UNKNOWN
        )
        return AnalyzerRun(
            analyzer_id=spec.id,
            variant_hash=variant.variant_hash,
            verdict=verdict,
            status=status,
            wall_ms=wall_ms,
            peak_memory_bytes=peak,
            output=output,
        )


def run_builtin(spec: AnalyzerSpec, variant: Variant) -> AnalyzerRun:
    fn = get_builtin(spec.builtin)
    start = time.monotonic()
    verdict, detail = fn(variant.program, dict(spec.options))
    wall_ms = (time.monotonic() - start) * 1000
    return AnalyzerRun(
        analyzer_id=spec.id,
        variant_hash=variant.variant_hash,
        verdict=verdict,
        status=RunStatus.COMPLETED,
        wall_ms=wall_ms,
        peak_memory_bytes=0,
        output=detail[:OUTPUT_CAP],
    )


def run_analyzer(spec: AnalyzerSpec, variant: Variant) -> AnalyzerRun:
    if spec.kind == "builtin":
        return run_builtin(spec, variant)
    return run_external(spec, variant)
