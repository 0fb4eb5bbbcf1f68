"""Turing machines and their configurations as dotted sequences.

A machine configuration is stored as a pair of finite symbol tuples
``(alpha, beta)``: ``alpha`` is the left half of the tape in reverse order
with the current state prepended, ``beta`` is the tape from the head
position rightwards.  Both halves are implicitly followed by an infinite
run of blanks, so trailing blanks are normalized away and equality of
configurations is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, Mapping, Sequence

Move = Literal["L", "R"]

MOVES = ("L", "R")

_SECTIONS = ("states", "symbols", "input", "start", "halt", "delta")


class MachineError(ValueError):
    """Base class for machine description and execution errors."""


class MachineSyntaxError(MachineError):
    """Malformed machine-description text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MachineValidationError(MachineError):
    """A well-formed description that violates a machine invariant."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class HaltedConfigError(MachineError):
    """Attempt to step a configuration whose state is a halt state."""


@dataclass(frozen=True)
class TuringMachine:
    """A deterministic single-tape machine.

    ``tape_symbols[0]`` is the blank.  ``delta`` maps every pair of
    non-halt state and tape symbol to ``(next state, written symbol,
    move)``; halt states have no entries.  State and symbol enumerations
    are given by declaration order.
    """

    states: tuple[str, ...]
    tape_symbols: tuple[str, ...]
    input_symbols: tuple[str, ...]
    start_state: str
    halt_states: frozenset[str]
    delta: Mapping[tuple[str, str], tuple[str, str, Move]]

    _state_index: dict = field(init=False, repr=False, compare=False)
    _symbol_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.states:
            raise MachineValidationError("machine declares no states")
        if not self.tape_symbols:
            raise MachineValidationError("machine declares no tape symbols")
        if len(set(self.states)) != len(self.states):
            raise MachineValidationError("duplicate state declaration")
        if len(set(self.tape_symbols)) != len(self.tape_symbols):
            raise MachineValidationError("duplicate symbol declaration")
        if self.start_state not in self.states:
            raise MachineValidationError(
                f"start state {self.start_state!r} is not declared"
            )
        for q in self.halt_states:
            if q not in self.states:
                raise MachineValidationError(f"halt state {q!r} is not declared")
        for s in self.input_symbols:
            if s not in self.tape_symbols:
                raise MachineValidationError(f"input symbol {s!r} is not declared")
            if s == self.blank:
                raise MachineValidationError(
                    "blank symbol cannot be part of the input alphabet"
                )
        for (q, s), (q2, s2, move) in self.delta.items():
            if q not in self.states or q2 not in self.states:
                raise MachineValidationError(
                    f"transition ({q}, {s}) references an undeclared state"
                )
            if s not in self.tape_symbols or s2 not in self.tape_symbols:
                raise MachineValidationError(
                    f"transition ({q}, {s}) references an undeclared symbol"
                )
            if q in self.halt_states:
                raise MachineValidationError(
                    f"halt state {q!r} must not have transitions"
                )
            if move not in MOVES:
                raise MachineValidationError(
                    f"transition ({q}, {s}) has illegal move {move!r}"
                )
        for q in self.states:
            if q in self.halt_states:
                continue
            for s in self.tape_symbols:
                if (q, s) not in self.delta:
                    raise MachineValidationError(
                        f"missing transition for ({q}, {s})"
                    )
        object.__setattr__(
            self, "_state_index", {q: i for i, q in enumerate(self.states)}
        )
        object.__setattr__(
            self, "_symbol_index", {s: i for i, s in enumerate(self.tape_symbols)}
        )

    @property
    def blank(self) -> str:
        return self.tape_symbols[0]

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_symbols(self) -> int:
        return len(self.tape_symbols)

    def state_index(self, q: str) -> int:
        """Enumeration of a state (position in the declaration order)."""
        return self._state_index[q]

    def symbol_index(self, s: str) -> int:
        """Enumeration of a tape symbol; the blank always maps to 0."""
        return self._symbol_index[s]

    def is_halt(self, q: str) -> bool:
        return q in self.halt_states


@dataclass(frozen=True)
class Config:
    """A machine configuration split at the head position.

    ``alpha[0]`` is the current state, ``alpha[1:]`` the tape to the left of
    the head nearest-first, ``beta[0]`` the symbol under the head.  Both
    tuples are canonical: no trailing blanks.
    """

    alpha: tuple[str, ...]
    beta: tuple[str, ...]

    @property
    def state(self) -> str:
        return self.alpha[0]


def canonical_config(m: TuringMachine, alpha: Sequence[str], beta: Sequence[str]) -> Config:
    """Build a configuration, stripping trailing explicit blanks."""
    a = list(alpha)
    b = list(beta)
    while len(a) > 1 and a[-1] == m.blank:
        a.pop()
    while b and b[-1] == m.blank:
        b.pop()
    return Config(tuple(a), tuple(b))


def initial_config(m: TuringMachine, word: Iterable[str]) -> Config:
    """Start configuration: head on the first symbol of ``word``."""
    symbols = tuple(word)
    for s in symbols:
        if s not in m.input_symbols:
            raise MachineValidationError(f"{s!r} is not an input symbol")
    return canonical_config(m, (m.start_state,), symbols)


def tm_step(m: TuringMachine, c: Config) -> Config:
    """Apply one transition.  Raises on halted configurations."""
    q = c.alpha[0]
    if q in m.halt_states:
        raise HaltedConfigError(f"configuration is halted in state {q!r}")
    read = c.beta[0] if c.beta else m.blank
    q2, written, move = m.delta[(q, read)]
    if move == "R":
        alpha = (q2, written) + c.alpha[1:]
        beta = c.beta[1:]
    else:
        left = c.alpha[1] if len(c.alpha) > 1 else m.blank
        alpha = (q2,) + c.alpha[2:]
        beta = (left, written) + c.beta[1:]
    return canonical_config(m, alpha, beta)


@dataclass(frozen=True)
class Trace:
    """A run prefix: the initial configuration and every successor."""

    configs: tuple[Config, ...]
    halted: bool

    @property
    def steps(self) -> int:
        return len(self.configs) - 1

    @property
    def final(self) -> Config:
        return self.configs[-1]


def run_tm(m: TuringMachine, c0: Config, max_steps: int) -> Trace:
    """Iterate ``tm_step`` until a halt state is entered or ``max_steps``."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    configs = [c0]
    cur = c0
    for _ in range(max_steps):
        if cur.state in m.halt_states:
            break
        cur = tm_step(m, cur)
        configs.append(cur)
    return Trace(tuple(configs), halted=configs[-1].state in m.halt_states)


def tape_string(m: TuringMachine, c: Config) -> str:
    """Written tape content, left to right, without the blank margins."""
    symbols = tuple(reversed(c.alpha[1:])) + c.beta
    sep = "" if all(len(s) == 1 for s in m.tape_symbols) else " "
    return sep.join(symbols)


def parse_machine(text: str) -> TuringMachine:
    """Parse the line-oriented machine-description format.

    Sections: ``states:``, ``symbols:`` (first entry is the blank),
    ``input:``, ``start:``, ``halt:`` and one ``delta:`` line per
    transition, written ``q s -> q' s' L|R``.  ``#`` starts a comment.
    """
    sections: dict[str, tuple[int, list[str]]] = {}
    delta_lines: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, colon, rest = line.partition(":")
        key = key.strip()
        if not colon:
            raise MachineSyntaxError("expected 'key: value'", lineno)
        if key not in _SECTIONS:
            raise MachineSyntaxError(f"unknown section {key!r}", lineno)
        tokens = rest.split()
        if key == "delta":
            delta_lines.append((lineno, tokens))
        else:
            if key in sections:
                raise MachineSyntaxError(f"duplicate {key!r} section", lineno)
            sections[key] = (lineno, tokens)

    for key in ("states", "symbols", "input", "start", "halt"):
        if key not in sections:
            raise MachineSyntaxError(f"missing {key!r} section")

    states = tuple(sections["states"][1])
    symbols = tuple(sections["symbols"][1])
    lineno, start_tokens = sections["start"]
    if len(start_tokens) != 1:
        raise MachineSyntaxError("start section must name exactly one state", lineno)
    start = start_tokens[0]
    halts = frozenset(sections["halt"][1])
    declared_states = set(states)
    declared_symbols = set(symbols)

    delta: dict[tuple[str, str], tuple[str, str, Move]] = {}
    for lineno, tokens in delta_lines:
        if len(tokens) != 6 or tokens[2] != "->":
            raise MachineSyntaxError(
                "delta line must read 'q s -> q' s' L|R'", lineno
            )
        q, s, _, q2, s2, move = tokens
        for name in (q, q2):
            if name not in declared_states:
                raise MachineValidationError(f"undeclared state {name!r}", lineno)
        for name in (s, s2):
            if name not in declared_symbols:
                raise MachineValidationError(f"undeclared symbol {name!r}", lineno)
        if move not in MOVES:
            raise MachineSyntaxError(f"move must be L or R, got {move!r}", lineno)
        if q in halts:
            raise MachineValidationError(
                f"halt state {q!r} must not have transitions", lineno
            )
        if (q, s) in delta:
            raise MachineValidationError(f"duplicate transition for ({q}, {s})", lineno)
        delta[(q, s)] = (q2, s2, move)

    return TuringMachine(
        states=states,
        tape_symbols=symbols,
        input_symbols=tuple(sections["input"][1]),
        start_state=start,
        halt_states=halts,
        delta=delta,
    )


def machine_to_text(m: TuringMachine) -> str:
    """Serialize a machine back to the description format."""
    lines = [
        "states: " + " ".join(m.states),
        "symbols: " + " ".join(m.tape_symbols),
        "input: " + " ".join(m.input_symbols),
        "start: " + m.start_state,
        "halt: " + " ".join(q for q in m.states if q in m.halt_states),
    ]
    for q in m.states:
        if q in m.halt_states:
            continue
        for s in m.tape_symbols:
            q2, s2, move = m.delta[(q, s)]
            lines.append(f"delta: {q} {s} -> {q2} {s2} {move}")
    return "\n".join(lines) + "\n"
