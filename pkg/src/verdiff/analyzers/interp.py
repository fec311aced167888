"""Bounded reference interpreter.

Exhaustively enumerates executions in which every nondeterministic input
draws from a finite value set S and every loop runs at most K iterations.
Verdicts:

  - unsafe: some enumerated execution violates the variant's assertion
    (the witnessing choice trail is reported and can be replayed);
  - safe: exploration finished with provably full coverage: no loop or
    call-depth truncation, and every choice point's option set covered the
    whole domain of its type (true for bool, practically never for int);
  - unknown: anything else (truncation, incomplete value sets, or the
    path/step budget ran out).

Defined semantics shared with the interval analyzer: two's-complement
wraparound on every operation, division/remainder by zero yield 0 and the
dividend, shift counts masked to 5 bits, array indices reduced modulo the
array length.  Uninitialized locals read nondeterministically (drawn from
S, then sticky); globals are zero-initialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..lang.nodes import (
    Assert, Assign, Binary, BoolLit, Call, CallStmt, Compound, Empty, For,
    FunctionDef, If, IncDec, Index, IntLit, Name, Node, Return, Unary,
    VarDecl, While,
)
from ..lang.program import Program
from ..lang.types import (
    Ty, c_mod, common_type, convert, promote, shift_amount, trunc_div, wrap,
)
from ..synth.pool import build_constant_pool
from .verdicts import Verdict


@dataclass(frozen=True)
class InterpConfig:
    loop_bound: int = 64
    call_depth_bound: int = 64
    nondet_values: tuple[int, ...] | None = None  # None: derived from the program's constant pool
    max_steps: int = 2_000_000  # statements across all enumerated paths
    max_paths: int = 4096


@dataclass
class InterpResult:
    verdict: Verdict
    paths: int
    steps: int
    truncated: bool  # some path hit the loop/call bound
    complete_coverage: bool  # every choice point covered its full type domain
    budget_exhausted: bool
    witness: tuple[int, ...] | None = None  # choice trail of a violating path
    detail: str = ""


class _Truncated(Exception):
    pass


class _BudgetExhausted(Exception):
    pass


class _Violation(Exception):
    pass


class _ReturnSignal(Exception):
    def __init__(self, value: int):
        self.value = value


_UNINIT = object()


def apply_binary(op: str, lt: Ty, rt: Ty, lv: int, rv: int) -> int:
    """Semantics of one binary operation on already-typed operand values."""
    if op in ("<", ">", "<=", ">=", "==", "!="):
        co = common_type(lt, rt)
        a, b = wrap(lv, co), wrap(rv, co)
        return int({
            "<": a < b, ">": a > b, "<=": a <= b, ">=": a >= b,
            "==": a == b, "!=": a != b,
        }[op])
    if op in ("<<", ">>"):
        co = promote(lt)
        a = wrap(lv, co)
        amt = shift_amount(wrap(rv, promote(rt)))
        return wrap(a << amt, co) if op == "<<" else wrap(a >> amt, co)
    co = common_type(lt, rt)
    a, b = wrap(lv, co), wrap(rv, co)
    match op:
        case "+":
            raw = a + b
        case "-":
            raw = a - b
        case "*":
            raw = a * b
        case "/":
            raw = trunc_div(a, b)
        case "%":
            raw = c_mod(a, b)
        case "&":
            raw = a & b
        case "|":
            raw = a | b
        case "^":
            raw = a ^ b
        case _:
            raise ValueError(f"unknown binary operator {op!r}")
    return wrap(raw, co)


def apply_unary(op: str, ty: Ty, v: int) -> int:
    if op == "!":
        return 1 if v == 0 else 0
    co = promote(ty)
    a = wrap(v, co)
    match op:
        case "-":
            return wrap(-a, co)
        case "+":
            return a
        case "~":
            return wrap(~a, co)
    raise ValueError(f"unknown unary operator {op!r}")


def _full_domain(ty: Ty, options: tuple[int, ...]) -> bool:
    return len(options) == (1 << ty.width)


class _Budget:
    """Step/path accounting shared by every path of one exploration."""

    def __init__(self, cfg: InterpConfig):
        self.cfg = cfg
        self.steps = 0
        self.paths = 0

    def step(self) -> None:
        self.steps += 1
        if self.steps > self.cfg.max_steps:
            raise _BudgetExhausted


class _Machine:
    """Executes one path, replaying a prefix of choices and recording all
    decisions it makes at nondeterministic choice points."""

    def __init__(self, program: Program, cfg: InterpConfig,
                 options_by_ty: dict[Ty, tuple[int, ...]], budget: _Budget,
                 prefix: list[tuple[int, int, bool]]):
        self.program = program
        self.cfg = cfg
        self.options_by_ty = options_by_ty
        self.budget = budget
        self.prefix = prefix
        self.decisions: list[tuple[int, int, bool]] = []  # (chosen, n_options, complete)
        self.globals: dict[int, object] = {}
        self.frames: list[dict[int, object]] = []
        self.call_depth = 0
        self.violation_node: Node | None = None

    # --- choice handling ---

    def choose(self, ty: Ty) -> int:
        options = self.options_by_ty[ty]
        complete = _full_domain(ty, options)
        i = len(self.decisions)
        chosen = self.prefix[i][0] if i < len(self.prefix) else 0
        self.decisions.append((chosen, len(options), complete))
        return options[chosen]

    # --- storage ---

    def _store_of(self, sym) -> dict[int, object]:
        return self.globals if sym.is_global else self.frames[-1]

    def _read_scalar(self, sym) -> int:
        store = self._store_of(sym)
        v = store.get(sym.sid, _UNINIT)
        if v is _UNINIT:
            v = self.choose(sym.ty)
            store[sym.sid] = v
        return v  # type: ignore[return-value]

    def _array_of(self, sym) -> list[object]:
        store = self._store_of(sym)
        arr = store.get(sym.sid)
        if arr is None:
            arr = [_UNINIT] * sym.array_len
            store[sym.sid] = arr
        return arr  # type: ignore[return-value]

    def _index_of(self, node: Index) -> tuple[list[object], int]:
        sym = node.base.symbol  # type: ignore[attr-defined]
        arr = self._array_of(sym)
        idx = wrap(self.eval(node.index), Ty.INT)
        return arr, idx % len(arr)

    # --- execution ---

    def run(self) -> str:
        self.globals = {}
        for g in self.program.globals:
            sym = g.symbol  # type: ignore[attr-defined]
            if sym.is_array:
                self.globals[sym.sid] = [0] * sym.array_len
            else:
                value = self.eval_const(g.init) if g.init is not None else 0
                self.globals[sym.sid] = convert(value, sym.ty)
        try:
            self.call(self.program.functions["main"], [])
        except _Violation:
            return "violation"
        except _Truncated:
            return "truncated"
        return "completed"

    def eval_const(self, e: Node) -> int:
        # Global initializers are constant by the type checker.
        return self.eval(e)

    def call(self, fn: FunctionDef, args: list[int]) -> int:
        if self.call_depth >= self.cfg.call_depth_bound:
            raise _Truncated
        frame: dict[int, object] = {}
        for p, a in zip(fn.params, args):
            sym = p.symbol  # type: ignore[attr-defined]
            frame[sym.sid] = convert(a, sym.ty)
        self.frames.append(frame)
        self.call_depth += 1
        try:
            self.exec_block(fn.body)
        except _ReturnSignal as r:
            return convert(r.value, fn.return_type) if fn.return_type is not Ty.VOID else 0
        finally:
            self.frames.pop()
            self.call_depth -= 1
        return 0

    def exec_block(self, block: Compound) -> None:
        for stmt in block.stmts:
            self.exec_stmt(stmt)

    def exec_stmt(self, s: Node) -> None:
        self.budget.step()
        match s:
            case VarDecl():
                sym = s.symbol  # type: ignore[attr-defined]
                store = self._store_of(sym)
                if sym.is_array:
                    store[sym.sid] = [_UNINIT] * sym.array_len
                elif s.init is not None:
                    store[sym.sid] = convert(self.eval(s.init), sym.ty)
                else:
                    store[sym.sid] = _UNINIT
            case Assign():
                value = self.eval(s.value)
                self.assign(s.target, value)
            case IncDec():
                ty = s.target.ty  # type: ignore[attr-defined]
                delta = 1 if s.op == "++" else -1
                if isinstance(s.target, Name):
                    sym = s.target.symbol  # type: ignore[attr-defined]
                    old = self._read_scalar(sym)
                    new = apply_binary("+", ty, Ty.INT, old, delta)
                    self._store_of(sym)[sym.sid] = convert(new, sym.ty)
                else:
                    assert isinstance(s.target, Index)
                    sym = s.target.base.symbol  # type: ignore[attr-defined]
                    arr, i = self._index_of(s.target)  # lvalue evaluated once
                    old = arr[i]
                    if old is _UNINIT:
                        old = self.choose(sym.ty)
                    new = apply_binary("+", ty, Ty.INT, old, delta)  # type: ignore[arg-type]
                    arr[i] = convert(new, sym.ty)
            case CallStmt():
                self.eval_call(s.call)
            case Compound():
                self.exec_block(s)
            case If():
                if self.eval(s.cond) != 0:
                    self.exec_block(s.then)
                elif s.els is not None:
                    self.exec_block(s.els)
            case While():
                self.loop(None, s.cond, None, s.body)
            case For():
                self.loop(s.init, s.cond, s.step, s.body)
            case Return():
                raise _ReturnSignal(self.eval(s.value) if s.value is not None else 0)
            case Assert():
                if self.eval(s.cond) == 0:
                    self.violation_node = s
                    raise _Violation
            case Empty():
                pass
            case _:
                raise ValueError(f"cannot execute node {s.kind}")

    def loop(self, init: Node | None, cond: Node | None, step: Node | None, body: Compound) -> None:
        if init is not None:
            self.exec_stmt(init)
        iterations = 0
        while True:
            self.budget.step()
            if cond is not None and self.eval(cond) == 0:
                return
            if iterations >= self.cfg.loop_bound:
                raise _Truncated
            self.exec_block(body)
            if step is not None:
                self.exec_stmt(step)
            iterations += 1

    def assign(self, target: Node, value: int) -> None:
        if isinstance(target, Name):
            sym = target.symbol  # type: ignore[attr-defined]
            self._store_of(sym)[sym.sid] = convert(value, sym.ty)
        else:
            assert isinstance(target, Index)
            sym = target.base.symbol  # type: ignore[attr-defined]
            arr, i = self._index_of(target)
            arr[i] = convert(value, sym.ty)

    # --- expressions ---

    def eval(self, e: Node) -> int:
        match e:
            case IntLit():
                return wrap(e.value, e.ty)  # type: ignore[attr-defined]
            case BoolLit():
                return 1 if e.value else 0
            case Name():
                return self._read_scalar(e.symbol)  # type: ignore[attr-defined]
            case Index():
                sym = e.base.symbol  # type: ignore[attr-defined]
                arr, i = self._index_of(e)
                v = arr[i]
                if v is _UNINIT:
                    v = self.choose(sym.ty)
                    arr[i] = v
                return v  # type: ignore[return-value]
            case Unary():
                return apply_unary(e.op, e.operand.ty, self.eval(e.operand))  # type: ignore[attr-defined]
            case Binary(op="&&"):
                if self.eval(e.left) == 0:
                    return 0
                return 1 if self.eval(e.right) != 0 else 0
            case Binary(op="||"):
                if self.eval(e.left) != 0:
                    return 1
                return 1 if self.eval(e.right) != 0 else 0
            case Binary():
                lv = self.eval(e.left)
                rv = self.eval(e.right)
                return apply_binary(e.op, e.left.ty, e.right.ty, lv, rv)  # type: ignore[attr-defined]
            case Call():
                return self.eval_call(e)
        raise ValueError(f"cannot evaluate node {e.kind}")

    def eval_call(self, call: Call) -> int:
        if call.name.startswith("nondet_"):
            ty = {"nondet_int": Ty.INT, "nondet_char": Ty.CHAR, "nondet_bool": Ty.BOOL}[call.name]
            return self.choose(ty)
        args = [self.eval(a) for a in call.args]
        return self.call(self.program.functions[call.name], args)


def default_nondet_values(program: Program) -> tuple[int, ...]:
    """Boundary values plus the program's constant pool (which includes
    MIN_INT, -1, 0, 1, MAX_INT by construction)."""
    return tuple(build_constant_pool(program).sorted_entries())


def _options_by_type(values: tuple[int, ...]) -> dict[Ty, tuple[int, ...]]:
    return {
        ty: tuple(sorted({wrap(v, ty) for v in values}))
        for ty in (Ty.BOOL, Ty.CHAR, Ty.INT, Ty.UINT)
    }


def bounded_interpret(program: Program, cfg: InterpConfig | None = None) -> InterpResult:
    cfg = cfg or InterpConfig()
    values = cfg.nondet_values if cfg.nondet_values is not None else default_nondet_values(program)
    if not values:
        raise ValueError("nondet value set must be nonempty")
    options_by_ty = _options_by_type(tuple(values))
    budget = _Budget(cfg)
    truncated = False
    all_complete = True
    exhausted = False

    prefix: list[tuple[int, int, bool]] = []
    while True:
        budget.paths += 1
        if budget.paths > cfg.max_paths:
            exhausted = True
            break
        machine = _Machine(program, cfg, options_by_ty, budget, prefix)
        try:
            outcome = machine.run()
        except _BudgetExhausted:
            exhausted = True
            break
        decisions = machine.decisions
        if any(not complete for (_, _, complete) in decisions):
            all_complete = False
        if outcome == "violation":
            return InterpResult(
                verdict=Verdict.UNSAFE,
                paths=budget.paths,
                steps=budget.steps,
                truncated=truncated,
                complete_coverage=False,
                budget_exhausted=False,
                witness=tuple(i for (i, _, _) in decisions),
                detail="assertion violated; witness trail recorded",
            )
        if outcome == "truncated":
            truncated = True
        # Advance to the next unexplored branch (deepest first).
        while decisions and decisions[-1][0] + 1 >= decisions[-1][1]:
            decisions.pop()
        if not decisions:
            break
        last, n, complete = decisions[-1]
        decisions[-1] = (last + 1, n, complete)
        prefix = decisions

    if exhausted:
        verdict = Verdict.UNKNOWN
        detail = "exploration budget exhausted"
    elif truncated:
        verdict = Verdict.UNKNOWN
        detail = "some executions were truncated at the loop/call bound"
    elif not all_complete:
        verdict = Verdict.UNKNOWN
        detail = "nondet value set does not cover the full input domain"
    else:
        verdict = Verdict.SAFE
        detail = "exhaustive exploration completed"
    return InterpResult(
        verdict=verdict,
        paths=budget.paths,
        steps=budget.steps,
        truncated=truncated,
        complete_coverage=all_complete and not truncated,
        budget_exhausted=exhausted,
        witness=None,
        detail=detail,
    )


def replay(program: Program, witness: tuple[int, ...], cfg: InterpConfig | None = None) -> bool:
    """Re-execute one choice trail; True iff it violates the assertion."""
    cfg = cfg or InterpConfig()
    values = cfg.nondet_values if cfg.nondet_values is not None else default_nondet_values(program)
    machine = _Machine(
        program, cfg, _options_by_type(tuple(values)), _Budget(cfg),
        [(i, 0, True) for i in witness],
    )
    return machine.run() == "violation"


def eval_pure_expression(expr: Node, values: dict[str, int], arrays: dict[str, list[int]] | None = None) -> int:
    """Evaluate a pure expression in an explicit state (no choice points)."""

    def ev(e: Node) -> int:
        match e:
            case IntLit():
                return wrap(e.value, e.ty)  # type: ignore[attr-defined]
            case BoolLit():
                return 1 if e.value else 0
            case Name():
                return values[e.name]
            case Index():
                arr = (arrays or {})[e.base.name]
                return arr[wrap(ev(e.index), Ty.INT) % len(arr)]
            case Unary():
                return apply_unary(e.op, e.operand.ty, ev(e.operand))  # type: ignore[attr-defined]
            case Binary(op="&&"):
                return 0 if ev(e.left) == 0 else (1 if ev(e.right) != 0 else 0)
            case Binary(op="||"):
                return 1 if ev(e.left) != 0 else (1 if ev(e.right) != 0 else 0)
            case Binary():
                return apply_binary(e.op, e.left.ty, e.right.ty, ev(e.left), ev(e.right))  # type: ignore[attr-defined]
        raise ValueError(f"not a pure expression node: {e.kind}")

    return ev(expr)
