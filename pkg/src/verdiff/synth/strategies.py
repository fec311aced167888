"""Search strategies over the candidate-expression space.

Static strategies assign a weight to every candidate and sample by
normalized probability:

  - uniform-random:  w = 1
  - breadth-biased:  w = 1/depth(location)
  - depth-biased:    w = depth(location)

Dynamic strategies walk the statement tree instead.  random-walk starts at
the first location in main that has candidates and moves in a random
direction (next statement, enclosing statement, into a compound body, or
into a called function's body).  guided-walk weights descending moves 3:1
over lateral/upward ones as a static proxy for "costlier" locations.
Unavailable directions simply drop out of the draw, which redistributes
their probability proportionally.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ..lang.candidates import CandidateExpression, enumerate_candidates
from ..lang.nodes import (
    Call, Compound, For, FunctionDef, If, Node, While, walk,
)
from ..lang.program import Program


class Strategy(Enum):
    UNIFORM_RANDOM = "uniform-random"
    BREADTH_BIASED = "breadth-biased"
    DEPTH_BIASED = "depth-biased"
    RANDOM_WALK = "random-walk"
    GUIDED_WALK = "guided-walk"

    @classmethod
    def from_name(cls, name: str) -> "Strategy":
        for s in cls:
            if s.value == name:
                return s
        raise ValueError(f"unknown strategy {name!r} (choose from {[s.value for s in cls]})")

    @property
    def is_static(self) -> bool:
        return self in (Strategy.UNIFORM_RANDOM, Strategy.BREADTH_BIASED, Strategy.DEPTH_BIASED)


class NoCandidatesError(Exception):
    """The program has no candidate expressions to instrument."""


@dataclass(frozen=True)
class StrategyWeight:
    candidate_index: int
    weight: Fraction
    probability: Fraction


def strategy_weights(candidates: list[CandidateExpression], strategy: Strategy) -> list[StrategyWeight]:
    """Exact weights and selection probabilities for a static strategy."""
    if not strategy.is_static:
        raise ValueError(f"{strategy.value} is not weight-based")
    if not candidates:
        return []
    if strategy is Strategy.UNIFORM_RANDOM:
        weights = [Fraction(1) for _ in candidates]
    elif strategy is Strategy.BREADTH_BIASED:
        weights = [Fraction(1, c.depth) for c in candidates]
    else:
        weights = [Fraction(c.depth) for c in candidates]
    total = sum(weights)
    return [
        StrategyWeight(c.index, w, w / total)
        for c, w in zip(candidates, weights)
    ]


# --- walk support -----------------------------------------------------------


@dataclass
class _StmtInfo:
    node: Node
    next: Node | None  # next sibling in the same compound
    up: Node | None  # statement owning the enclosing compound
    down: list[Node]  # first statements of directly contained bodies
    callees: list[str]  # user functions called anywhere in this statement


class _WalkIndex:
    def __init__(self, program: Program):
        self.info: dict[int, _StmtInfo] = {}
        self.first_stmt: dict[str, Node | None] = {}
        for fn in program.functions.values():
            first = fn.body.stmts[0] if fn.body.stmts else None
            self.first_stmt[fn.name] = first
            self._index_compound(fn.body, owner=None, functions=program.functions)

    def _index_compound(self, block: Compound, owner: Node | None, functions) -> None:
        for i, stmt in enumerate(block.stmts):
            nxt = block.stmts[i + 1] if i + 1 < len(block.stmts) else None
            down: list[Node] = []
            bodies: list[Compound] = []
            match stmt:
                case If():
                    bodies = [stmt.then] + ([stmt.els] if stmt.els is not None else [])
                case While():
                    bodies = [stmt.body]
                case For():
                    bodies = [stmt.body]
                case Compound():
                    bodies = [stmt]
            for b in bodies:
                if b.stmts:
                    down.append(b.stmts[0])
            callees = [
                n.name
                for n in walk(stmt)
                if isinstance(n, Call) and n.name in functions and functions[n.name].body.stmts
            ]
            self.info[stmt.location_id] = _StmtInfo(stmt, nxt, owner, down, callees)
            for b in bodies:
                self._index_compound(b, owner=stmt, functions=functions)


_WALK_MOVE_LIMIT = 32


class CandidateSelector:
    """Stateful candidate selection for one synthesis campaign.

    Static strategies are stateless draws; walk strategies keep their
    current statement between calls.
    """

    def __init__(self, program: Program, strategy: Strategy, rng: random.Random):
        self.program = program
        self.strategy = strategy
        self.rng = rng
        self.candidates = enumerate_candidates(program)
        self.by_location: dict[int, list[CandidateExpression]] = {}
        for c in self.candidates:
            self.by_location.setdefault(c.location, []).append(c)
        self._weights: list[float] | None = None
        if strategy.is_static and self.candidates:
            self._weights = [float(w.weight) for w in strategy_weights(self.candidates, strategy)]
        self._walk_index: _WalkIndex | None = None
        self._walk_pos: Node | None = None

    def select(self) -> CandidateExpression:
        if not self.candidates:
            raise NoCandidatesError("program has no candidate expressions")
        if self.strategy.is_static:
            return self.rng.choices(self.candidates, weights=self._weights, k=1)[0]
        return self._walk_select()

    def select_at(self, location: int) -> CandidateExpression:
        """Uniform draw among candidates sharing one location (batch conjuncts)."""
        group = self.by_location[location]
        return self.rng.choice(group)

    # --- dynamic strategies ---

    def _walk_select(self) -> CandidateExpression:
        if self._walk_index is None:
            self._walk_index = _WalkIndex(self.program)
        if self._walk_pos is None:
            start = self._first_main_location()
            self._walk_pos = start
            group = self.by_location.get(start.location_id)
            if group:
                return group[0]
        for _ in range(_WALK_MOVE_LIMIT):
            self._walk_pos = self._move(self._walk_pos)
            if self._walk_pos is None:
                break
            group = self.by_location.get(self._walk_pos.location_id)
            if group:
                return self.rng.choice(group)
        # Dead end: fall back to a uniform draw over all candidates.
        self._walk_pos = None
        return self.rng.choice(self.candidates)

    def _first_main_location(self) -> Node:
        main = self.program.functions["main"]
        for stmt in walk(main.body):
            if stmt.location_id in self._walk_index.info and self.by_location.get(stmt.location_id):
                return stmt
        # No candidate-bearing statement in main; start at its first statement.
        first = self._walk_index.first_stmt.get("main")
        if first is None:
            raise NoCandidatesError("main has no statements to walk")
        return first

    def _move(self, pos: Node) -> Node | None:
        info = self._walk_index.info.get(pos.location_id)
        if info is None:
            return None
        directions: list[str] = []
        weights: list[int] = []
        deep_weight = 3 if self.strategy is Strategy.GUIDED_WALK else 1
        if info.next is not None:
            directions.append("next")
            weights.append(1)
        if info.up is not None:
            directions.append("up")
            weights.append(1)
        if info.down:
            directions.append("down")
            weights.append(deep_weight)
        if info.callees:
            directions.append("call")
            weights.append(deep_weight)
        if not directions:
            return None
        move = self.rng.choices(directions, weights=weights, k=1)[0]
        if move == "next":
            return info.next
        if move == "up":
            return info.up
        if move == "down":
            return self.rng.choice(info.down)
        callee = self.rng.choice(info.callees)
        return self._walk_index.first_stmt[callee]


def select_candidate(
    program: Program,
    strategy: Strategy,
    rng: random.Random,
    state: CandidateSelector | None = None,
) -> tuple[CandidateExpression, CandidateSelector]:
    """Functional wrapper around CandidateSelector for one-shot use."""
    selector = state if state is not None else CandidateSelector(program, strategy, rng)
    return selector.select(), selector
