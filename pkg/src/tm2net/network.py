"""First-order recurrent network compiled from the piecewise affine system.

Three layers of simple units simulate the switched dynamics in real time,
one network iteration per machine step:

* MCL (machine configuration layer): two ramp units holding the encoded
  configuration (c_x, c_y).
* BSL (branch selection layer): one Heaviside unit per grid line, thresholds
  at the cell boundaries, forming a staircase code of the current cell.
* LTL (linear transformation layer): one ramp unit pair per cell computing
  that cell's affine map, silenced by a bias -h unless the BSL delivers the
  full h of excitation (h/2 per axis, inhibition from the next line's unit).

Every weight is an exact rational; simulation runs either exactly or in
float64 (the latter only to show how expansion destroys the encoding).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .encode import Point, parse_rat, rat_str
from .nda import Nda

HALT_ATOL = 1e-9  # float-mode fixed-point tolerance per coordinate

MCL_X, MCL_Y = "mcl_x", "mcl_y"
BSL_X, BSL_Y = "bsl_x", "bsl_y"
LTL_X, LTL_Y = "ltl_x", "ltl_y"
BIAS = "bias"

ACTIVATION = {
    MCL_X: "ramp",
    MCL_Y: "ramp",
    BSL_X: "heaviside",
    BSL_Y: "heaviside",
    LTL_X: "ramp",
    LTL_Y: "ramp",
    BIAS: "one",
}


class NetworkFormatError(ValueError):
    """Malformed or inconsistent serialized network."""


class DegenerateMachineError(ValueError):
    """No positive inhibition bias exists (impossible for valid machines)."""


def unit_count(n_q: int, n_s: int) -> int:
    """Total units: 2 MCL + (n_s + n_s*n_q) BSL + 2*n_s^2*n_q LTL + 1 bias."""
    return 2 + n_s + n_s * n_q + 2 * n_s * n_s * n_q + 1


@dataclass(frozen=True)
class Unit:
    id: int
    kind: str
    index: int | None = None  # BSL position along its axis
    cell: tuple[int, int] | None = None  # LTL cell


@dataclass(frozen=True)
class Network:
    """Units plus exact weighted adjacency; immutable after construction.

    ``weights`` maps (from unit id, to unit id) to the exact weight; zero
    entries are omitted.  The machine enumeration tables travel along so a
    serialized network stays decodable.
    """

    n_q: int
    n_s: int
    states: tuple[str, ...]
    symbols: tuple[str, ...]
    h: Fraction
    units: tuple[Unit, ...]
    weights: Mapping[tuple[int, int], Fraction]

    _bsl_ids: tuple = field(init=False, repr=False, compare=False)
    _ltl_ids: tuple = field(init=False, repr=False, compare=False)
    _in_edges: tuple = field(init=False, repr=False, compare=False)
    _in_edges_float: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.units)
        incoming = [[] for _ in range(n)]
        for (src, dst), w in sorted(self.weights.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            incoming[dst].append((src, w))
        in_edges = tuple(tuple(edges) for edges in incoming)
        object.__setattr__(self, "_in_edges", in_edges)
        object.__setattr__(
            self,
            "_in_edges_float",
            tuple(tuple((src, float(w)) for src, w in edges) for edges in in_edges),
        )
        object.__setattr__(
            self, "_bsl_ids",
            tuple(u.id for u in self.units if u.kind in (BSL_X, BSL_Y)),
        )
        object.__setattr__(
            self, "_ltl_ids",
            tuple(u.id for u in self.units if u.kind in (LTL_X, LTL_Y)),
        )

    @property
    def n_units(self) -> int:
        return len(self.units)

    @property
    def n_x_cells(self) -> int:
        return self.n_q * self.n_s

    @property
    def n_y_cells(self) -> int:
        return self.n_s

    @property
    def bias_id(self) -> int:
        return self.n_units - 1

    def bsl_x_id(self, i: int) -> int:
        return 2 + i

    def bsl_y_id(self, j: int) -> int:
        return 2 + self.n_x_cells + j

    def ltl_ids(self, i: int, j: int) -> tuple[int, int]:
        base = 2 + self.n_x_cells + self.n_y_cells + 2 * (i * self.n_y_cells + j)
        return base, base + 1

    def weight(self, src: int, dst: int) -> Fraction:
        return self.weights.get((src, dst), Fraction(0))

    def dense_weights(self) -> list[list[Fraction]]:
        zero = Fraction(0)
        mat = [[zero] * self.n_units for _ in range(self.n_units)]
        for (src, dst), w in self.weights.items():
            mat[src][dst] = w
        return mat


def _layout_units(n_q: int, n_s: int) -> tuple[Unit, ...]:
    m, n = n_q * n_s, n_s
    units = [Unit(0, MCL_X), Unit(1, MCL_Y)]
    units += [Unit(2 + i, BSL_X, index=i) for i in range(m)]
    units += [Unit(2 + m + j, BSL_Y, index=j) for j in range(n)]
    uid = 2 + m + n
    for i in range(m):
        for j in range(n):
            units.append(Unit(uid, LTL_X, cell=(i, j)))
            units.append(Unit(uid + 1, LTL_Y, cell=(i, j)))
            uid += 2
    units.append(Unit(uid, BIAS))
    return tuple(units)


def build_network(nda: Nda) -> Network:
    """Wire the network for a switched system; h is the minimal valid bias.

    The bias satisfies h/2 >= max(a + lambda) over all branch parameters,
    taken with equality: a ramp unit at exactly zero input stays silent, so
    the half-excited partial sum h/2 can never fire a wrong cell.
    """
    mach = nda.machine
    n_q, n_s = mach.n_states, mach.n_symbols
    m, n = n_q * n_s, n_s

    peak = max(
        max(br.a_x + br.lambda_x, br.a_y + br.lambda_y)
        for br in nda.branches.values()
    )
    if peak <= 0:
        raise DegenerateMachineError("max(a + lambda) must be positive")
    h = 2 * peak

    units = _layout_units(n_q, n_s)
    bias = unit_count(n_q, n_s) - 1
    half = h / 2

    def bsl_x(i: int) -> int:
        return 2 + i

    def bsl_y(j: int) -> int:
        return 2 + m + j

    def ltl_x(i: int, j: int) -> int:
        return 2 + m + n + 2 * (i * n + j)

    weights: dict[tuple[int, int], Fraction] = {}

    def put(src: int, dst: int, w: Fraction) -> None:
        if w:
            weights[(src, dst)] = w

    for i in range(m):
        put(0, bsl_x(i), Fraction(1))
        put(bias, bsl_x(i), -nda.partition.x_bounds[i])
    for j in range(n):
        put(1, bsl_y(j), Fraction(1))
        put(bias, bsl_y(j), -nda.partition.y_bounds[j])

    for (i, j), br in nda.branches.items():
        tx = ltl_x(i, j)
        ty = tx + 1
        put(0, tx, br.lambda_x)
        put(1, ty, br.lambda_y)
        put(bias, tx, br.a_x - h)
        put(bias, ty, br.a_y - h)
        for t in (tx, ty):
            put(bsl_x(i), t, half)
            if i + 1 < m:
                put(bsl_x(i + 1), t, -half)
            put(bsl_y(j), t, half)
            if j + 1 < n:
                put(bsl_y(j + 1), t, -half)
        put(tx, 0, Fraction(1))
        put(ty, 1, Fraction(1))

    net = Network(
        n_q=n_q,
        n_s=n_s,
        states=mach.states,
        symbols=mach.tape_symbols,
        h=h,
        units=units,
        weights=weights,
    )
    assert net.n_units == unit_count(n_q, n_s)
    return net


@dataclass(frozen=True)
class NetState:
    """One full activation vector; the bias unit is pinned to 1."""

    mode: str  # "exact" | "float64"
    values: tuple

    @property
    def mcl(self) -> tuple:
        return self.values[0], self.values[1]


def initial_state(net: Network, pt: Point, mode: str = "exact") -> NetState:
    """MCL set to the encoded configuration, everything else silent."""
    if mode not in ("exact", "float64"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact":
        values = [Fraction(0)] * net.n_units
        values[0], values[1] = Fraction(pt.x), Fraction(pt.y)
        values[net.bias_id] = 1
    else:
        values = [0.0] * net.n_units
        values[0], values[1] = float(pt.x), float(pt.y)
        values[net.bias_id] = 1.0
    return NetState(mode, tuple(values))


def net_step(net: Network, state: NetState) -> NetState:
    """One machine step as a three-phase sweep over the adjacency.

    Phase 1 re-thresholds the BSL against the current MCL, phase 2 lets the
    LTL read MCL, BSL and bias, phase 3 writes the LTL sums back into the
    MCL through the ramp.
    """
    exact = state.mode == "exact"
    edges = net._in_edges if exact else net._in_edges_float
    zero = Fraction(0) if exact else 0.0
    vals = list(state.values)
    # MCL values are untouched until phase 3, so reading `vals` below always
    # sees old MCL and (in phase 2) fresh BSL.
    for u in net._bsl_ids:
        total = zero
        for src, w in edges[u]:
            v = vals[src]
            if v:
                total = total + w * v
        vals[u] = 1 if total >= 0 else 0
    for u in net._ltl_ids:
        total = zero
        for src, w in edges[u]:
            v = vals[src]
            if v:
                total = total + w * v
        vals[u] = total if total > 0 else zero
    for u in (0, 1):
        total = zero
        for src, w in edges[u]:
            v = vals[src]
            if v:
                total = total + w * v
        vals[u] = total if total > 0 else zero
    return NetState(state.mode, tuple(vals))


def _mcl_fixed(net: Network, a: NetState, b: NetState) -> bool:
    if a.mode == "exact":
        return a.values[0] == b.values[0] and a.values[1] == b.values[1]
    return (abs(a.values[0] - b.values[0]) <= HALT_ATOL
            and abs(a.values[1] - b.values[1]) <= HALT_ATOL)


def is_halted(net: Network, state: NetState) -> bool:
    """Fixed-point halting: one more iteration leaves the MCL unchanged."""
    return _mcl_fixed(net, state, net_step(net, state))


def bsl_pattern(net: Network, state: NetState) -> tuple[int, ...]:
    return tuple(1 if state.values[u] else 0 for u in net._bsl_ids)


def active_cell(net: Network, state: NetState) -> tuple[int, int] | None:
    """Cell of the positive LTL pair, None if all LTL units are silent."""
    cells = {net.units[u].cell for u in net._ltl_ids if state.values[u] > 0}
    if not cells:
        return None
    if len(cells) > 1:
        raise ValueError(f"multiple active LTL cells: {sorted(cells)}")
    return cells.pop()


@dataclass(frozen=True)
class NetTrace:
    states: tuple[NetState, ...]
    halted: bool

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    @property
    def final(self) -> NetState:
        return self.states[-1]


def run_network(net: Network, s0: NetState, max_steps: int) -> NetTrace:
    """Iterate until the MCL reaches a fixed point or ``max_steps``."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    states = [s0]
    cur = s0
    halted = False
    for _ in range(max_steps):
        nxt = net_step(net, cur)
        if _mcl_fixed(net, cur, nxt):
            halted = True
            break
        states.append(nxt)
        cur = nxt
    else:
        halted = _mcl_fixed(net, cur, net_step(net, cur))
    return NetTrace(tuple(states), halted)


TRACE_FIELDS = ("step", "c_x", "c_y", "active_cell_i", "active_cell_j", "halted")


def net_trace_rows(net: Network, trace: NetTrace) -> list[dict]:
    """CSV rows: exact values as num/den, floats with 17 significant digits."""
    rows = []
    last = len(trace.states) - 1
    for t, s in enumerate(trace.states):
        if s.mode == "exact":
            cx, cy = rat_str(s.values[0]), rat_str(s.values[1])
        else:
            cx, cy = f"{s.values[0]:.17g}", f"{s.values[1]:.17g}"
        cell = active_cell(net, s)
        rows.append({
            "step": t,
            "c_x": cx,
            "c_y": cy,
            "active_cell_i": "" if cell is None else cell[0],
            "active_cell_j": "" if cell is None else cell[1],
            "halted": trace.halted and t == last,
        })
    return rows


def export_network(net: Network) -> dict:
    """Lossless JSON document (meta, units, sparse weight list)."""
    units = []
    for u in net.units:
        params: dict = {"activation": ACTIVATION[u.kind]}
        if u.index is not None:
            params["index"] = u.index
        if u.cell is not None:
            params["cell"] = [u.cell[0], u.cell[1]]
        units.append({"id": u.id, "kind": u.kind, "params": params})
    weights = [
        {"from": src, "to": dst, "value": rat_str(w)}
        for (src, dst), w in sorted(net.weights.items())
    ]
    return {
        "meta": {
            "n_q": net.n_q,
            "n_s": net.n_s,
            "h": rat_str(net.h),
            "states": list(net.states),
            "symbols": list(net.symbols),
            "cell_order": "x cells by (state index, left-symbol index), "
                          "y cells by head-symbol index, 0-based",
        },
        "units": units,
        "weights": weights,
    }


def import_network(doc: dict) -> Network:
    """Parse and fully validate a serialized network.

    Rejects unit lists that break the count formula or the canonical
    layout, and any weight off the permitted value set of its edge type.
    """
    try:
        meta = doc["meta"]
        n_q, n_s = int(meta["n_q"]), int(meta["n_s"])
        h = parse_rat(meta["h"])
        states = tuple(meta["states"])
        symbols = tuple(meta["symbols"])
        unit_docs = doc["units"]
        weight_docs = doc["weights"]
    except (KeyError, TypeError) as exc:
        raise NetworkFormatError(f"malformed network document: {exc}") from exc
    if n_q < 1 or n_s < 1:
        raise NetworkFormatError("n_q and n_s must be positive")
    if len(states) != n_q or len(symbols) != n_s:
        raise NetworkFormatError("state/symbol tables do not match n_q/n_s")
    if h <= 0:
        raise NetworkFormatError("h must be positive")

    expected_units = _layout_units(n_q, n_s)
    if len(unit_docs) != len(expected_units):
        raise NetworkFormatError(
            f"unit count {len(unit_docs)} does not match the formula value "
            f"{unit_count(n_q, n_s)} for n_q={n_q}, n_s={n_s}"
        )
    try:
        unit_docs = sorted(unit_docs, key=lambda u: u.get("id", -1))
    except (AttributeError, TypeError) as exc:
        raise NetworkFormatError("malformed unit list") from exc
    units = []
    for entry in unit_docs:
        try:
            params = entry.get("params", {})
            u = Unit(
                id=int(entry["id"]),
                kind=entry["kind"],
                index=params.get("index"),
                cell=tuple(params["cell"]) if "cell" in params else None,
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise NetworkFormatError(f"malformed unit entry: {entry}") from exc
        if "activation" in params and params["activation"] != ACTIVATION.get(u.kind):
            raise NetworkFormatError(f"unit {u.id}: wrong activation for {u.kind}")
        units.append(u)
    for got, want in zip(units, expected_units):
        if got != want:
            raise NetworkFormatError(
                f"unit {got.id} deviates from the canonical layout: "
                f"got {got}, expected {want}"
            )

    weights: dict[tuple[int, int], Fraction] = {}
    for entry in weight_docs:
        try:
            src, dst = int(entry["from"]), int(entry["to"])
            w = parse_rat(entry["value"])
        except (KeyError, TypeError) as exc:
            raise NetworkFormatError(f"malformed weight entry: {entry}") from exc
        if not (0 <= src < len(units) and 0 <= dst < len(units)):
            raise NetworkFormatError(f"weight references unknown unit: {entry}")
        if (src, dst) in weights:
            raise NetworkFormatError(f"duplicate weight for edge {(src, dst)}")
        weights[(src, dst)] = w

    net = Network(n_q=n_q, n_s=n_s, states=states, symbols=symbols, h=h,
                  units=tuple(units), weights=weights)
    _validate_wiring(net)
    return net


def _validate_wiring(net: Network) -> None:
    """Check every edge against the architecture and its permitted value."""
    m, n = net.n_x_cells, net.n_y_cells
    h, half = net.h, net.h / 2
    bias = net.bias_id
    allowed: set[tuple[int, int]] = set()

    def expect(src: int, dst: int, value: Fraction, label: str) -> None:
        allowed.add((src, dst))
        if net.weight(src, dst) != value:
            raise NetworkFormatError(
                f"{label}: weight {net.weight(src, dst)} != required {value}"
            )

    def grab(src: int, dst: int, label: str) -> Fraction:
        allowed.add((src, dst))
        if (src, dst) not in net.weights:
            raise NetworkFormatError(f"{label}: missing edge")
        return net.weights[(src, dst)]

    for i in range(m):
        b = net.bsl_x_id(i)
        expect(0, b, Fraction(1), f"mcl_x -> bsl_x[{i}]")
        expect(bias, b, Fraction(-i, m), f"bias -> bsl_x[{i}]")
    for j in range(n):
        b = net.bsl_y_id(j)
        expect(1, b, Fraction(1), f"mcl_y -> bsl_y[{j}]")
        expect(bias, b, Fraction(-j, n), f"bias -> bsl_y[{j}]")

    for i in range(m):
        for j in range(n):
            tx, ty = net.ltl_ids(i, j)
            for t, mcl, axis in ((tx, 0, "x"), (ty, 1, "y")):
                label = f"ltl_{axis}{(i, j)}"
                lam = grab(mcl, t, f"mcl -> {label}")
                if lam <= 0:
                    raise NetworkFormatError(f"{label}: lambda must be positive")
                a = grab(bias, t, f"bias -> {label}") + h
                if a + lam > half:
                    raise NetworkFormatError(
                        f"{label}: a + lambda = {a + lam} exceeds h/2 = {half}"
                    )
                expect(net.bsl_x_id(i), t, half, f"bsl_x[{i}] -> {label}")
                if i + 1 < m:
                    expect(net.bsl_x_id(i + 1), t, -half, f"bsl_x[{i + 1}] -> {label}")
                expect(net.bsl_y_id(j), t, half, f"bsl_y[{j}] -> {label}")
                if j + 1 < n:
                    expect(net.bsl_y_id(j + 1), t, -half, f"bsl_y[{j + 1}] -> {label}")
                expect(t, mcl, Fraction(1), f"{label} -> mcl")

    extras = set(net.weights) - allowed
    if extras:
        raise NetworkFormatError(
            f"edges outside the permitted architecture: {sorted(extras)[:5]}"
        )
