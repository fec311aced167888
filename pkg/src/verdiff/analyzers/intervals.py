"""Flow-sensitive interval analysis with widening and narrowing.

Loop heads iterate to a fixpoint; after `widen_after` iterations unstable
bounds are widened to the type extremes, and one narrowing pass recovers
precision afterwards.  The analysis is sound with respect to the bounded
interpreter: intervals are computed in exact arithmetic and any result that
could leave its type's representable range is widened to the full range,
which models two's-complement wraparound.

The verdict is `safe` iff every reachable assertion is provably non-zero in
the final abstract states; otherwise `unsafe` (a warning).  The analyzer
never answers `unknown`.

Precision choices mirror common interval domains: dis-equalities refine an
interval only when the excluded value is one of its endpoints; array
contents are summarized by a single interval per array (weak updates);
calls are analyzed by inlining, while functions involved in recursion are
approximated by havocking globals and analyzing their bodies once under a
top state.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..lang.nodes import (
    Assert, Assign, Binary, BoolLit, Call, CallStmt, Compound, Empty, For,
    FunctionDef, If, IncDec, Index, IntLit, Name, Node, Return, Unary,
    VarDecl, While, walk,
)
from ..lang.printer import expr_to_text
from ..lang.program import Program
from ..lang.types import Ty, common_type, promote, trunc_div, wrap
from .verdicts import Verdict

Itv = tuple[int, int]
State = dict[int, Itv]  # symbol id -> interval (array symbols: element summary)


def top(ty: Ty) -> Itv:
    return (ty.min, ty.max)


def wrap_itv(lo: int, hi: int, ty: Ty) -> Itv:
    """Two's-complement truncation of an exact-arithmetic interval.

    A contiguous range shorter than 2**width maps to a contiguous wrapped
    range unless it crosses the wrap boundary; anything else becomes the
    full type range.
    """
    if hi - lo >= (1 << ty.width):
        return top(ty)
    wl, wh = wrap(lo, ty), wrap(hi, ty)
    if wl <= wh:
        return (wl, wh)
    return top(ty)


def convert_itv(itv: Itv, ty: Ty) -> Itv:
    if ty is Ty.BOOL:
        lo, hi = itv
        can_zero = lo <= 0 <= hi
        can_nonzero = (lo, hi) != (0, 0)
        return (0 if can_zero else 1, 1 if can_nonzero else 0)
    return wrap_itv(itv[0], itv[1], ty)


def hull(a: Itv, b: Itv) -> Itv:
    return (min(a[0], b[0]), max(a[1], b[1]))


def meet(a: Itv, b: Itv) -> Itv | None:
    lo, hi = max(a[0], b[0]), min(a[1], b[1])
    return (lo, hi) if lo <= hi else None


def _truth(itv: Itv) -> Itv:
    """Truth-value interval of a condition operand (0 = false)."""
    lo, hi = itv
    if (lo, hi) == (0, 0):
        return (0, 0)
    if lo > 0 or hi < 0:
        return (1, 1)
    return (0, 1)


def _split_nonzero(itv: Itv) -> list[Itv]:
    parts = []
    if itv[0] <= -1:
        parts.append((itv[0], min(itv[1], -1)))
    if itv[1] >= 1:
        parts.append((max(itv[0], 1), itv[1]))
    return parts


def apply_binary_itv(op: str, lt: Ty, rt: Ty, L: Itv, R: Itv) -> Itv:
    """Abstract counterpart of interp.apply_binary."""
    if op in ("<", ">", "<=", ">=", "==", "!="):
        co = common_type(lt, rt)
        a = convert_itv(L, co) if lt is not co else L
        b = convert_itv(R, co) if rt is not co else R
        sure_true, sure_false = _compare_bounds(op, a, b)
        if sure_true:
            return (1, 1)
        if sure_false:
            return (0, 0)
        return (0, 1)
    if op in ("&&", "||"):
        lt_truth, rt_truth = _truth(L), _truth(R)
        if op == "&&":
            if lt_truth == (0, 0) or rt_truth == (0, 0):
                return (0, 0)
            if lt_truth == (1, 1) and rt_truth == (1, 1):
                return (1, 1)
            return (0, 1)
        if lt_truth == (1, 1) or rt_truth == (1, 1):
            return (1, 1)
        if lt_truth == (0, 0) and rt_truth == (0, 0):
            return (0, 0)
        return (0, 1)
    if op in ("<<", ">>"):
        co = promote(lt)
        a = convert_itv(L, co) if lt is not co else L
        rp = promote(rt)
        amt = convert_itv(R, rp) if rt is not rp else R
        if amt[0] < 0 or amt[1] > 31:
            amt = (0, 31)  # masked shift counts can be anything
        cands = []
        for x in (a[0], a[1]):
            for s in (amt[0], amt[1]):
                cands.append(x << s if op == "<<" else x >> s)
        return wrap_itv(min(cands), max(cands), co)
    co = common_type(lt, rt)
    a = convert_itv(L, co) if lt is not co else L
    b = convert_itv(R, co) if rt is not co else R
    match op:
        case "+":
            return wrap_itv(a[0] + b[0], a[1] + b[1], co)
        case "-":
            return wrap_itv(a[0] - b[1], a[1] - b[0], co)
        case "*":
            cands = [x * y for x in a for y in b]
            return wrap_itv(min(cands), max(cands), co)
        case "/":
            cands = [0] if b[0] <= 0 <= b[1] else []
            for part in _split_nonzero(b):
                for x in a:
                    for y in part:
                        cands.append(trunc_div(x, y))
            if not cands:
                cands = [0]
            return wrap_itv(min(cands), max(cands), co)
        case "%":
            res: Itv | None = None
            parts = _split_nonzero(b)
            if parts:
                m = max(abs(y) for part in parts for y in part)
                lo = 0 if a[0] >= 0 else -(m - 1)
                hi = 0 if a[1] <= 0 else m - 1
                if a[0] >= 0:
                    hi = min(hi, a[1])  # 0 <= x % y <= x for x >= 0
                if a[1] <= 0:
                    lo = max(lo, a[0])
                res = (lo, hi)
            if b[0] <= 0 <= b[1]:  # x % 0 == x
                res = a if res is None else hull(res, a)
            assert res is not None
            return wrap_itv(res[0], res[1], co)
        case "&" | "|" | "^":
            if a[0] >= 0 and b[0] >= 0:
                if op == "&":
                    return (0, min(a[1], b[1]))
                bits = max(a[1].bit_length(), b[1].bit_length())
                return (0, min((1 << bits) - 1, co.max))
            return top(co)
    raise ValueError(f"unknown binary operator {op!r}")


def _compare_bounds(op: str, a: Itv, b: Itv) -> tuple[bool, bool]:
    """(surely true, surely false) of `a op b` over interval boxes."""
    alo, ahi = a
    blo, bhi = b
    match op:
        case "<":
            return ahi < blo, alo >= bhi
        case ">":
            return alo > bhi, ahi <= blo
        case "<=":
            return ahi <= blo, alo > bhi
        case ">=":
            return alo >= bhi, ahi < blo
        case "==":
            return (alo == ahi == blo == bhi), (ahi < blo or alo > bhi)
        case "!=":
            return (ahi < blo or alo > bhi), (alo == ahi == blo == bhi)
    raise ValueError(op)


def apply_unary_itv(op: str, ty: Ty, v: Itv) -> Itv:
    if op == "!":
        t = _truth(v)
        return (1 - t[1], 1 - t[0])
    co = promote(ty)
    a = convert_itv(v, co) if ty is not co else v
    match op:
        case "-":
            return wrap_itv(-a[1], -a[0], co)
        case "+":
            return a
        case "~":
            return wrap_itv(-a[1] - 1, -a[0] - 1, co)
    raise ValueError(op)


@dataclass(frozen=True)
class IntervalConfig:
    widen_after: int = 3


@dataclass
class CheckRecord:
    proved: bool
    location_id: int
    text: str
    truth: Itv


_NONDET_TYPES = {"nondet_int": Ty.INT, "nondet_char": Ty.CHAR, "nondet_bool": Ty.BOOL}

# (return interval, state snapshot at the return statement)
_Returns = list[tuple[Itv, State]]


class IntervalAnalyzer:
    def __init__(self, program: Program, cfg: IntervalConfig | None = None):
        self.program = program
        self.cfg = cfg or IntervalConfig()
        self.checks: list[CheckRecord] = []
        self.recursive = self._recursive_functions()
        self._top_analyzed: set[str] = set()
        self._ty_of: dict[int, Ty] = {}
        for node in walk(program.ast_root):
            sym = getattr(node, "symbol", None)
            if sym is not None and isinstance(node, (VarDecl,)):
                self._ty_of[sym.sid] = sym.ty
        for fn in program.functions.values():
            for p in fn.params:
                self._ty_of[p.symbol.sid] = p.symbol.ty  # type: ignore[attr-defined]

    # --- call-graph classification ---

    def _recursive_functions(self) -> set[str]:
        calls: dict[str, set[str]] = {}
        for name, fn in self.program.functions.items():
            calls[name] = {
                n.name for n in walk(fn.body)
                if isinstance(n, Call) and n.name in self.program.functions
            }
        recursive = set()
        for start in calls:
            seen: set[str] = set()
            stack = sorted(calls[start])
            while stack:
                f = stack.pop()
                if f == start:
                    recursive.add(start)
                    break
                if f not in seen:
                    seen.add(f)
                    stack.extend(sorted(calls[f]))
        return recursive

    # --- entry point ---

    def run(self) -> Verdict:
        st: State = {}
        for g in self.program.globals:
            sym = g.symbol  # type: ignore[attr-defined]
            if sym.is_array:
                st[sym.sid] = (0, 0)
            elif g.init is not None:
                st[sym.sid] = convert_itv(self.eval(g.init, st, False), sym.ty)
            else:
                st[sym.sid] = (0, 0)
        main = self.program.functions["main"]
        self.block(main.body, st, record=True, returns=[])
        if all(c.proved for c in self.checks):
            return Verdict.SAFE
        return Verdict.UNSAFE

    def detail(self) -> str:
        failing = [c for c in self.checks if not c.proved]
        if not failing:
            return f"all {len(self.checks)} reachable assertion evaluation(s) proved"
        c = failing[0]
        return f"cannot prove assertion: {c.text} has truth interval {c.truth}"

    # --- state helpers ---

    def havoc_globals(self, st: State) -> None:
        for g in self.program.globals:
            sym = g.symbol  # type: ignore[attr-defined]
            st[sym.sid] = top(sym.ty)

    @staticmethod
    def join(a: State | None, b: State | None) -> State | None:
        if a is None:
            return dict(b) if b is not None else None
        if b is None:
            return dict(a)
        return {sid: hull(a[sid], b[sid]) for sid in a.keys() & b.keys()}

    # --- statements ---

    def block(self, block: Compound, st: State | None, record: bool, returns: _Returns) -> State | None:
        for stmt in block.stmts:
            if st is None:
                return None  # unreachable tail
            st = self.stmt(stmt, st, record, returns)
        return st

    def stmt(self, s: Node, st: State, record: bool, returns: _Returns) -> State | None:
        match s:
            case VarDecl():
                sym = s.symbol  # type: ignore[attr-defined]
                if sym.is_array:
                    st[sym.sid] = top(sym.ty)
                elif s.init is not None:
                    st[sym.sid] = convert_itv(self.eval(s.init, st, record), sym.ty)
                else:
                    st[sym.sid] = top(sym.ty)  # uninitialized reads are nondet
                return st
            case Assign():
                value = self.eval(s.value, st, record)
                return self._assign(s.target, value, st, record)
            case IncDec():
                ty = s.target.ty  # type: ignore[attr-defined]
                old = self.eval(s.target, st, record)
                delta = (1, 1) if s.op == "++" else (-1, -1)
                new = apply_binary_itv("+", ty, Ty.INT, old, delta)
                return self._assign(s.target, new, st, record)
            case CallStmt():
                self.eval(s.call, st, record)
                return st
            case Compound():
                return self.block(s, st, record, returns)
            case If():
                self.eval(s.cond, st, record)  # call effects in the condition
                then_in = self.refine(dict(st), s.cond, True)
                else_in = self.refine(dict(st), s.cond, False)
                then_out = self.block(s.then, then_in, record, returns) if then_in is not None else None
                if s.els is not None:
                    else_out = self.block(s.els, else_in, record, returns) if else_in is not None else None
                else:
                    else_out = else_in
                return self.join(then_out, else_out)
            case While():
                return self.loop(None, s.cond, None, s.body, st, record, returns)
            case For():
                return self.loop(s.init, s.cond, s.step, s.body, st, record, returns)
            case Return():
                itv = self.eval(s.value, st, record) if s.value is not None else (0, 0)
                returns.append((itv, dict(st)))
                return None
            case Assert():
                itv = self.eval(s.cond, st, record)
                truth = _truth(itv)
                if record:
                    self.checks.append(
                        CheckRecord(truth[0] >= 1, s.location_id, expr_to_text(s.cond), truth)
                    )
                return self.refine(st, s.cond, True)  # execution continues only if it held
            case Empty():
                return st
        raise ValueError(f"cannot analyze statement {s.kind}")

    def _assign(self, target: Node, value: Itv, st: State, record: bool) -> State:
        if isinstance(target, Name):
            sym = target.symbol  # type: ignore[attr-defined]
            st[sym.sid] = convert_itv(value, sym.ty)
        else:
            assert isinstance(target, Index)
            sym = target.base.symbol  # type: ignore[attr-defined]
            self.eval(target.index, st, record)  # index effects
            st[sym.sid] = hull(st[sym.sid], convert_itv(value, sym.ty))  # weak update
        return st

    # --- loops ---

    def loop(self, init: Node | None, cond: Node | None, step: Node | None,
             body: Compound, st: State, record: bool, returns: _Returns) -> State | None:
        state: State | None = st
        if init is not None:
            state = self.stmt(init, st, record, returns)
        if state is None:
            return None
        entry = dict(state)
        head = dict(state)
        iteration = 0
        while True:
            nxt = self.join(entry, self._body_out(head, cond, step, body, returns))
            assert nxt is not None  # entry is always reachable
            new_head = self.widen(head, nxt) if iteration >= self.cfg.widen_after else nxt
            if new_head == head:
                break
            head = new_head
            iteration += 1
        # One narrowing pass: head is a post-fixpoint, so F(head) stays sound.
        narrowed = self.join(entry, self._body_out(head, cond, step, body, returns))
        assert narrowed is not None
        head = narrowed
        if record:
            # Check pass under the settled invariant; asserts in the
            # condition itself are recorded here as well.
            taken = self._enter_body(dict(head), cond, record=True)
            if taken is not None:
                out = self.block(body, taken, True, returns)
                if out is not None and step is not None:
                    self.stmt(step, out, True, returns)
        after_cond = dict(head)
        if cond is not None:
            self.eval(cond, after_cond, False)
            return self.refine(after_cond, cond, False)
        return None  # no exit condition: the statement after the loop is unreachable

    def _enter_body(self, head: State, cond: Node | None, record: bool) -> State | None:
        if cond is None:
            return head
        self.eval(cond, head, record)
        return self.refine(head, cond, True)

    def _body_out(self, head: State, cond: Node | None, step: Node | None,
                  body: Compound, returns: _Returns) -> State | None:
        taken = self._enter_body(dict(head), cond, record=False)
        if taken is None:
            return None
        out = self.block(body, taken, False, returns)
        if out is not None and step is not None:
            out = self.stmt(step, out, False, returns)
        return out

    def widen(self, old: State, new: State) -> State:
        result: State = {}
        for sid in old.keys() & new.keys():
            (olo, ohi), (nlo, nhi) = old[sid], new[sid]
            ty = self._ty_of.get(sid, Ty.INT)
            lo = olo if nlo >= olo else min(nlo, ty.min)
            hi = ohi if nhi <= ohi else max(nhi, ty.max)
            result[sid] = (lo, hi)
        return result

    # --- expressions ---

    def eval(self, e: Node, st: State, record: bool) -> Itv:
        match e:
            case IntLit():
                v = wrap(e.value, e.ty)  # type: ignore[attr-defined]
                return (v, v)
            case BoolLit():
                v = 1 if e.value else 0
                return (v, v)
            case Name():
                sym = e.symbol  # type: ignore[attr-defined]
                return st[sym.sid]
            case Index():
                sym = e.base.symbol  # type: ignore[attr-defined]
                self.eval(e.index, st, record)
                return st[sym.sid]
            case Unary():
                return apply_unary_itv(e.op, e.operand.ty, self.eval(e.operand, st, record))  # type: ignore[attr-defined]
            case Binary(op="&&" | "||"):
                L = self.eval(e.left, st, record)
                # The right operand may be skipped by short-circuiting, so
                # its side effects only "may" happen: join states.
                before = dict(st)
                R = self.eval(e.right, st, record)
                for sid, itv in before.items():
                    if sid in st:
                        st[sid] = hull(st[sid], itv)
                return apply_binary_itv(e.op, e.left.ty, e.right.ty, L, R)  # type: ignore[attr-defined]
            case Binary():
                L = self.eval(e.left, st, record)
                R = self.eval(e.right, st, record)
                return apply_binary_itv(e.op, e.left.ty, e.right.ty, L, R)  # type: ignore[attr-defined]
            case Call():
                return self.call(e, st, record)
        raise ValueError(f"cannot evaluate {e.kind}")

    def call(self, call: Call, st: State, record: bool) -> Itv:
        if call.name in _NONDET_TYPES:
            return top(_NONDET_TYPES[call.name])
        fn = self.program.functions[call.name]
        if call.name in self.recursive:
            self.havoc_globals(st)
            if record and call.name not in self._top_analyzed:
                self._top_analyzed.add(call.name)
                self._analyze_under_top(fn)
            return top(fn.return_type) if fn.return_type is not Ty.VOID else (0, 0)
        args = [self.eval(a, st, record) for a in call.args]
        for p, a in zip(fn.params, args):
            sym = p.symbol  # type: ignore[attr-defined]
            st[sym.sid] = convert_itv(a, sym.ty)
        returns: _Returns = []
        out = self.block(fn.body, st, record, returns)
        ret_itvs = [itv for itv, _ in returns]
        exit_states: list[State] = [snap for _, snap in returns]
        if out is not None:
            exit_states.append(out)
            ret_itvs.append((0, 0))  # falling off the end returns 0
        if exit_states:
            merged = exit_states[0]
            for s in exit_states[1:]:
                joined = self.join(merged, s)
                assert joined is not None
                merged = joined
            st.clear()
            st.update(merged)
        # If exit_states is empty the call never returns; treating it as
        # returning is an over-approximation, which is sound for proving.
        if fn.return_type is Ty.VOID or not ret_itvs:
            return (0, 0)
        result = ret_itvs[0]
        for itv in ret_itvs[1:]:
            result = hull(result, itv)
        return convert_itv(result, fn.return_type)

    def _analyze_under_top(self, fn: FunctionDef) -> None:
        """Record the asserts of a recursive function under a top state.

        Any concrete activation's state is covered by top, so checks proved
        here hold for every call depth.
        """
        st: State = {}
        self.havoc_globals(st)
        for p in fn.params:
            sym = p.symbol  # type: ignore[attr-defined]
            st[sym.sid] = top(sym.ty)
        self.block(fn.body, st, record=True, returns=[])

    # --- condition refinement (pure: never evaluates calls) ---

    def refine(self, st: State | None, cond: Node, want_true: bool) -> State | None:
        if st is None:
            return None
        pure = self._pure_itv(cond, st)
        if pure is not None:
            truth = _truth(pure)
            if want_true and truth == (0, 0):
                return None
            if not want_true and truth == (1, 1):
                return None
        match cond:
            case Unary(op="!"):
                return self.refine(st, cond.operand, not want_true)
            case Binary(op="&&") if want_true:
                st = self.refine(st, cond.left, True)
                return self.refine(st, cond.right, True) if st is not None else None
            case Binary(op="||") if not want_true:
                st = self.refine(st, cond.left, False)
                return self.refine(st, cond.right, False) if st is not None else None
            case Binary(op=op) if op in ("<", ">", "<=", ">=", "==", "!="):
                effective = op if want_true else _NEGATED[op]
                return self._refine_compare(st, cond.left, effective, cond.right)
            case Name():
                return self._refine_compare(st, cond, "!=" if want_true else "==", _ZERO)
        return st

    def _pure_itv(self, e: Node, st: State) -> Itv | None:
        if any(isinstance(n, Call) for n in walk(e)):
            return None
        return self.eval(e, st, False)

    def _refine_compare(self, st: State, left: Node, op: str, right: Node) -> State | None:
        left_itv = self._pure_itv(left, st)
        right_itv = self._pure_itv(right, st)
        if left_itv is None or right_itv is None:
            return st
        lt = getattr(left, "ty", Ty.INT)
        rt = getattr(right, "ty", Ty.INT)
        co = common_type(lt, rt)
        a = convert_itv(left_itv, co) if lt is not co else left_itv
        b = convert_itv(right_itv, co) if rt is not co else right_itv
        sure_true, sure_false = _compare_bounds(op, a, b)
        if sure_false:
            return None
        new: State | None = st
        if isinstance(left, Name):
            new = self._refine_var(new, left, op, b, co)
            if new is None:
                return None
        if isinstance(right, Name):
            new = self._refine_var(new, right, _MIRRORED[op], a, co)
        return new

    def _refine_var(self, st: State, var: Name, op: str, k: Itv, co: Ty) -> State | None:
        sym = var.symbol  # type: ignore[attr-defined]
        if sym.is_array:
            return st
        cur = st[sym.sid]
        vt = sym.ty
        # Refine only where the conversion to the comparison type preserves
        # the order of the variable's current values.
        monotone = (
            vt is co
            or promote(vt) is co
            or (vt is Ty.INT and co is Ty.UINT and cur[0] >= 0)
        )
        if not monotone:
            return st
        klo, khi = k
        match op:
            case "<":
                bound: Itv = (co.min, khi - 1)
            case "<=":
                bound = (co.min, khi)
            case ">":
                bound = (klo + 1, co.max)
            case ">=":
                bound = (klo, co.max)
            case "==":
                bound = (klo, khi)
            case "!=":
                if klo == khi:
                    lo, hi = cur
                    if lo == hi == klo:
                        return None
                    # dis-equalities refine only at the endpoints
                    if lo == klo:
                        st[sym.sid] = (lo + 1, hi)
                    elif hi == klo:
                        st[sym.sid] = (lo, hi - 1)
                return st
            case _:
                raise ValueError(op)
        refined = meet(cur, bound)
        if refined is None:
            return None
        st[sym.sid] = refined
        return st


_ZERO = IntLit(0)
_ZERO.ty = Ty.INT  # type: ignore[attr-defined]

_NEGATED = {"<": ">=", ">": "<=", "<=": ">", ">=": "<", "==": "!=", "!=": "=="}
_MIRRORED = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "==": "==", "!=": "!="}


def interval_analyze(program: Program, cfg: IntervalConfig | None = None) -> tuple[Verdict, str]:
    analyzer = IntervalAnalyzer(program, cfg)
    verdict = analyzer.run()
    return verdict, analyzer.detail()
