"""Deterministic single-tape Turing machines and a step-bounded simulator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import SftInputError, check_symbol

Transition = tuple[str, str, str]


@dataclass(frozen=True)
class TuringMachine:
    """States, tape alphabet (with blank), initial state, halting states and transitions.

    ``delta`` maps (state, symbol) to (state, symbol, "L" | "R"). A
    non-halting state with no entry for a symbol halts on it.
    """
    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    blank: str
    init: str
    halt: frozenset = frozenset()
    delta: Mapping[tuple[str, str], Transition] = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(self.states)
        alphabet = tuple(self.alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "halt", frozenset(self.halt))
        for s in states + alphabet:
            check_symbol(s)
        if len(set(states)) != len(states) or len(set(alphabet)) != len(alphabet):
            raise SftInputError("duplicate states or tape symbols")
        if self.blank not in alphabet:
            raise SftInputError("blank symbol is not in the tape alphabet")
        if self.init not in states:
            raise SftInputError("initial state is not a state")
        if not self.halt <= set(states):
            raise SftInputError("halting states must be states")
        delta = {}
        for (q, a), (q2, b, mv) in dict(self.delta).items():
            if q not in states or q2 not in states or a not in alphabet or b not in alphabet:
                raise SftInputError(f"transition ({q},{a}) -> ({q2},{b},{mv}) uses unknown names")
            if mv not in ("L", "R"):
                raise SftInputError(f"move must be L or R, got {mv!r}")
            if q in self.halt:
                raise SftInputError(f"halting state {q} has an outgoing transition")
            delta[(q, a)] = (q2, b, mv)
        object.__setattr__(self, "delta", dict(sorted(delta.items())))

    def step(self, q: str, a: str) -> Transition | None:
        """Transition for (q, a), or None when the machine stops there."""
        if q in self.halt:
            return None
        return self.delta.get((q, a))

    def __hash__(self):
        return hash((self.states, self.alphabet, self.blank, self.init, self.halt, tuple(self.delta.items())))


@dataclass(frozen=True)
class Halted:
    steps: int
    state: str
    tape: dict
    head: int


@dataclass(frozen=True)
class Running:
    steps: int


def run(M: TuringMachine, tape_input: Sequence[str] = (), step_budget: int = 1000) -> Halted | Running:
    """Simulate from state ``init`` with the head on cell 0 (input written from cell 0 rightwards)."""
    if step_budget < 0:
        raise SftInputError("step budget must be >= 0")
    tape: dict[int, str] = {}
    for i, s in enumerate(tape_input):
        if s not in M.alphabet:
            raise SftInputError(f"input symbol {s!r} not in the tape alphabet")
        if s != M.blank:
            tape[i] = s
    q, head = M.init, 0
    for t in range(step_budget + 1):
        tr = M.step(q, tape.get(head, M.blank))
        if tr is None:
            return Halted(t, q, dict(sorted(tape.items())), head)
        if t == step_budget:
            break
        q, b, mv = tr
        if b == M.blank:
            tape.pop(head, None)
        else:
            tape[head] = b
        head += 1 if mv == "R" else -1
    return Running(step_budget)


def halt_at_zero() -> TuringMachine:
    """No transitions at all: halts before its first step."""
    return TuringMachine(("A", "H"), ("0", "1"), "0", "A", {"H"}, {})


def halt_at_three() -> TuringMachine:
    """Writes three 1s moving right through A, B, C and stops in H."""
    delta = {("A", "0"): ("B", "1", "R"), ("B", "0"): ("C", "1", "R"), ("C", "0"): ("H", "1", "R")}
    return TuringMachine(("A", "B", "C", "H"), ("0", "1"), "0", "A", {"H"}, delta)


def never_halt() -> TuringMachine:
    """One state moving right forever over blanks."""
    return TuringMachine(("A",), ("0", "1"), "0", "A", frozenset(), {("A", "0"): ("A", "0", "R")})


FIXTURES = {"halt0": halt_at_zero, "halt3": halt_at_three, "loop": never_halt}
