"""Built-in analyzer registry.

A built-in is a callable (program, options) -> (Verdict, detail).  The
three shipped analyzers cover the roles needed for end-to-end testing: an
under-approximating bounded interpreter, a sound interval analyzer, and a
deliberately faulty size-reduction mutant.  Additional built-ins can be
registered (e.g. by tests) under new names.
"""

from __future__ import annotations

from typing import Callable

from ..lang.program import Program
from .interp import InterpConfig, bounded_interpret
from .intervals import IntervalConfig, interval_analyze
from .mutant import MutantConfig, size_reduction_mutant
from .verdicts import Verdict

BuiltinFn = Callable[[Program, dict], tuple[Verdict, str]]

_REGISTRY: dict[str, BuiltinFn] = {}


def register_builtin(name: str, fn: BuiltinFn) -> None:
    _REGISTRY[name] = fn


def get_builtin(name: str) -> BuiltinFn:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(
            f"unknown builtin analyzer {name!r}; available: {sorted(_REGISTRY)}"
        ) from None


def builtin_names() -> list[str]:
    return sorted(_REGISTRY)


def _interp_config(options: dict) -> InterpConfig:
    return InterpConfig(
        loop_bound=int(options.get("loop_bound", InterpConfig.loop_bound)),
        call_depth_bound=int(options.get("call_depth_bound", InterpConfig.call_depth_bound)),
        nondet_values=tuple(options["nondet_values"]) if "nondet_values" in options else None,
        max_steps=int(options.get("max_steps", InterpConfig.max_steps)),
        max_paths=int(options.get("max_paths", InterpConfig.max_paths)),
    )


def _run_bounded(program: Program, options: dict) -> tuple[Verdict, str]:
    result = bounded_interpret(program, _interp_config(options))
    detail = result.detail
    if result.witness is not None:
        detail += f"; witness trail {list(result.witness)}"
    return result.verdict, detail


def _run_intervals(program: Program, options: dict) -> tuple[Verdict, str]:
    cfg = IntervalConfig(widen_after=int(options.get("widen_after", 3)))
    return interval_analyze(program, cfg)


def _run_mutant(program: Program, options: dict) -> tuple[Verdict, str]:
    base = MutantConfig()
    interp = InterpConfig(
        loop_bound=int(options.get("loop_bound", base.interp.loop_bound)),
        call_depth_bound=int(options.get("call_depth_bound", base.interp.call_depth_bound)),
        nondet_values=tuple(options["nondet_values"]) if "nondet_values" in options else None,
        max_steps=int(options.get("max_steps", base.interp.max_steps)),
        max_paths=int(options.get("max_paths", base.interp.max_paths)),
    )
    cfg = MutantConfig(threshold=int(options.get("threshold", base.threshold)), interp=interp)
    return size_reduction_mutant(program, cfg)


register_builtin("bounded-interpreter", _run_bounded)
register_builtin("interval-analyzer", _run_intervals)
register_builtin("size-reduction-mutant", _run_mutant)
