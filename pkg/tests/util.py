"""Shared test helpers: deterministic random machines, inputs, configs."""

from __future__ import annotations

import random
from collections import deque

from tm2net.machine import Config, TuringMachine, canonical_config

MOVES = ("L", "R")


def halt_reachable(m: TuringMachine) -> bool:
    """BFS over the state graph induced by delta targets."""
    seen = {m.start_state}
    queue = deque([m.start_state])
    while queue:
        q = queue.popleft()
        if q in m.halt_states:
            return True
        for s in m.tape_symbols:
            q2 = m.delta[(q, s)][0]
            if q2 not in seen:
                seen.add(q2)
                queue.append(q2)
    return False


def random_machine(rng: random.Random, max_states: int = 4,
                   max_symbols: int = 4) -> TuringMachine:
    """Uniform transition targets; guaranteed at least one reachable halt state."""
    n_q = rng.randint(1, max_states)
    n_s = rng.randint(2, max_symbols)
    states = tuple(f"q{i}" for i in range(n_q))
    symbols = ("_",) + tuple(f"s{i}" for i in range(1, n_s))
    if n_q == 1:
        halts = frozenset(states)
    else:
        halts = frozenset(rng.sample(states, rng.randint(1, max(1, n_q // 2))))

    def draw():
        delta = {}
        for q in states:
            if q in halts:
                continue
            for s in symbols:
                delta[(q, s)] = (rng.choice(states), rng.choice(symbols),
                                 rng.choice(MOVES))
        return TuringMachine(
            states=states,
            tape_symbols=symbols,
            input_symbols=symbols[1:],
            start_state=states[0],
            halt_states=halts,
            delta=delta,
        )

    m = draw()
    for _ in range(50):
        if halt_reachable(m):
            return m
        m = draw()
    # rare corner: force the start state to reach a halt state directly
    delta = dict(m.delta)
    delta[(m.start_state, m.blank)] = (sorted(m.halt_states)[0], m.blank, "R")
    return TuringMachine(m.states, m.tape_symbols, m.input_symbols,
                         m.start_state, m.halt_states, delta)


def random_input(rng: random.Random, m: TuringMachine,
                 max_len: int = 6) -> tuple[str, ...]:
    if not m.input_symbols:
        return ()
    return tuple(rng.choice(m.input_symbols) for _ in range(rng.randint(0, max_len)))


def random_config(rng: random.Random, m: TuringMachine,
                  max_tail: int = 5) -> Config:
    alpha = (rng.choice(m.states),) + tuple(
        rng.choice(m.tape_symbols) for _ in range(rng.randint(0, max_tail)))
    beta = tuple(rng.choice(m.tape_symbols) for _ in range(rng.randint(0, max_tail)))
    return canonical_config(m, alpha, beta)


def machine_with_sizes(n_q: int, n_s: int) -> TuringMachine:
    """A trivial total machine of exactly the requested alphabet sizes."""
    states = tuple(f"q{i}" for i in range(n_q))
    symbols = ("_",) + tuple(f"s{i}" for i in range(1, n_s))
    halts = frozenset({states[-1]})
    delta = {}
    for i, q in enumerate(states):
        if q in halts:
            continue
        for s in symbols:
            delta[(q, s)] = (states[min(i + 1, n_q - 1)], s, "R")
    return TuringMachine(states, symbols, symbols[1:], states[0], halts, delta)
