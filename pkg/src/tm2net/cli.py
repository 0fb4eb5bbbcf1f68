"""Command-line driver for the whole pipeline.

Subcommands::

    tm2net compile MACHINE --target gs|nda|net --out PATH
    tm2net run     MACHINE WORD --level tm|gs|nda|net [--mode exact|float64]
                   [--max-steps N] [--trace PATH] [--format text|json|csv]
    tm2net compare MACHINE WORD [--max-steps N]
    tm2net info    MACHINE

Exit codes: 0 success, 1 input error (parse/validation), 2 I/O failure,
3 semantic mismatch from ``compare``.  Timeouts are reported in-band.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from dataclasses import dataclass

from . import encode, gshift, machine, nda, network
from .encode import EncodingError, Point, encode_config, rat_str
from .machine import MachineError, TuringMachine, initial_config, run_tm, tape_string
from .network import NetworkFormatError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_IO = 2
EXIT_MISMATCH = 3

LEVELS = ("tm", "gs", "nda", "net")

TM_TRACE_FIELDS = ("step", "state", "tape", "x", "y")


@dataclass
class RunReport:
    """Outcome of one run at one level, with the decoded final configuration."""

    level: str
    mode: str
    steps: int
    halted: bool
    final_state: str
    final_tape: str
    final_alpha: tuple[str, ...]
    final_beta: tuple[str, ...]
    final_x: str  # num/den
    final_y: str  # num/den
    final_float: tuple[float, float] | None = None
    divergence_step: int | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["final_alpha"] = list(self.final_alpha)
        d["final_beta"] = list(self.final_beta)
        if self.final_float is not None:
            d["final_float"] = list(self.final_float)
        return d


def parse_word(m: TuringMachine, text: str) -> tuple[str, ...]:
    """Input word from the command line.

    Whitespace- or comma-separated symbol names; a bare string is split
    into characters when every input symbol is a single character.
    """
    if not text:
        return ()
    if any(sep in text for sep in (" ", "\t", ",")):
        return tuple(tok for tok in text.replace(",", " ").split() if tok)
    if all(len(s) == 1 for s in m.input_symbols):
        return tuple(text)
    return (text,)


def _report_from_config(m, level, mode, trace_steps, halted, final_config,
                        final_float=None, divergence_step=None) -> RunReport:
    pt = encode_config(m, final_config)
    # the decoded configuration must re-encode to the reported point
    assert encode.decode_point(m, pt) == final_config
    return RunReport(
        level=level,
        mode=mode,
        steps=trace_steps,
        halted=halted,
        final_state=final_config.state,
        final_tape=tape_string(m, final_config),
        final_alpha=final_config.alpha,
        final_beta=final_config.beta,
        final_x=rat_str(pt.x),
        final_y=rat_str(pt.y),
        final_float=final_float,
        divergence_step=divergence_step,
    )


def run_level(m: TuringMachine, word, level: str, max_steps: int,
              mode: str = "exact"):
    """Run one pipeline level; returns (RunReport, trace rows for CSV)."""
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    if mode == "float64" and level != "net":
        raise ValueError("float64 mode exists only at level net")
    c0 = initial_config(m, word)

    if level in ("tm", "gs"):
        if level == "tm":
            trace = run_tm(m, c0, max_steps)
        else:
            trace = gshift.run_gs(gshift.build_gshift(m), c0, max_steps)
        rows = []
        for t, c in enumerate(trace.configs):
            pt = encode_config(m, c)
            rows.append({"step": t, "state": c.state, "tape": tape_string(m, c),
                         "x": rat_str(pt.x), "y": rat_str(pt.y)})
        report = _report_from_config(m, level, "exact", trace.steps,
                                     trace.halted, trace.final)
        return report, (TM_TRACE_FIELDS, rows)

    auto = nda.build_nda(m)
    pt0 = encode_config(m, c0)
    if level == "nda":
        trace = nda.run_nda(auto, pt0, max_steps)
        final = encode.decode_point(m, trace.points[-1])
        report = _report_from_config(m, level, "exact", trace.steps,
                                     trace.halted, final)
        return report, (nda.ORBIT_FIELDS, nda.orbit_rows(auto, trace.points))

    net = network.build_network(auto)
    exact_trace = network.run_network(net, network.initial_state(net, pt0), max_steps)
    if mode == "exact":
        x, y = exact_trace.final.mcl
        final = encode.decode_point(m, Point(x, y))
        report = _report_from_config(m, level, mode, exact_trace.steps,
                                     exact_trace.halted, final)
        return report, (network.TRACE_FIELDS, network.net_trace_rows(net, exact_trace))

    float_trace = network.run_network(
        net, network.initial_state(net, pt0, "float64"), max_steps)
    divergence = first_divergence(exact_trace, float_trace)
    x, y = exact_trace.final.mcl
    final = encode.decode_point(m, Point(x, y))
    fx, fy = float_trace.final.mcl
    report = _report_from_config(
        m, level, mode, float_trace.steps, float_trace.halted, final,
        final_float=(fx, fy), divergence_step=divergence)
    return report, (network.TRACE_FIELDS, network.net_trace_rows(net, float_trace))


def first_divergence(exact_trace, float_trace) -> int | None:
    """First step where the float64 MCL differs bitwise from the rounded
    exact MCL; None if they agree over the shared prefix and lengths match."""
    shared = min(len(exact_trace.states), len(float_trace.states))
    for t in range(shared):
        ex, ey = exact_trace.states[t].mcl
        fx, fy = float_trace.states[t].mcl
        if (float(ex), float(ey)) != (fx, fy):
            return t
    if len(exact_trace.states) != len(float_trace.states):
        return shared
    return None


@dataclass
class CompareResult:
    ok: bool
    steps: int
    halted: bool
    mismatch: tuple[int, str, str, Point, Point] | None = None
    # (step, reference level, deviating level, reference point, other point)


def compare_levels(m: TuringMachine, word, max_steps: int,
                   auto: nda.Nda | None = None,
                   net: network.Network | None = None) -> CompareResult:
    """Run all four levels in lockstep (exact mode) and compare pointwise.

    ``auto``/``net`` exist as injection points so tests can feed corrupted
    systems and observe the divergence step.
    """
    c0 = initial_config(m, word)
    tm_trace = run_tm(m, c0, max_steps)
    steps = tm_trace.steps
    gs = gshift.build_gshift(m)
    auto = auto if auto is not None else nda.build_nda(m)
    net = net if net is not None else network.build_network(auto)

    gs_c = c0
    pt = encode_config(m, c0)
    state = network.initial_state(net, pt)
    for t in range(steps + 1):
        reference = encode_config(m, tm_trace.configs[t])
        others = (
            ("gs", encode_config(m, gs_c)),
            ("nda", pt),
            ("net", Point(state.values[0], state.values[1])),
        )
        for level, got in others:
            if got != reference:
                return CompareResult(False, steps, tm_trace.halted,
                                     (t, "tm", level, reference, got))
        if t < steps:
            gs_c = gshift.gs_step(gs, gs_c)
            pt = nda.nda_step(auto, pt)
            state = network.net_step(net, state)
    return CompareResult(True, steps, tm_trace.halted)


def _load_machine(path: str) -> TuringMachine:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc
    return machine.parse_machine(text)


class _IOFailure(Exception):
    pass


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _write_csv(path: str, fields, rows) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _write_text(path, buf.getvalue())


def cmd_compile(args) -> int:
    m = _load_machine(args.machine)
    if args.target == "gs":
        _write_text(args.out, gshift.dump_rules(gshift.build_gshift(m)))
    elif args.target == "nda":
        doc = nda.nda_to_json(nda.build_nda(m))
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")
    else:
        net = network.build_network(nda.build_nda(m))
        doc = network.export_network(net)
        _write_text(args.out, json.dumps(doc, indent=2) + "\n")
        print(f"{net.n_units} units")
    return EXIT_OK


def _print_report(report: RunReport, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report.to_dict(), indent=2))
        return
    if fmt == "csv":
        d = report.to_dict()
        d["final_alpha"] = " ".join(report.final_alpha)
        d["final_beta"] = " ".join(report.final_beta)
        if report.final_float is not None:
            d["final_float"] = f"{report.final_float[0]:.17g} {report.final_float[1]:.17g}"
        writer = csv.DictWriter(sys.stdout, fieldnames=list(d), lineterminator="\n")
        writer.writeheader()
        writer.writerow(d)
        return
    print(f"level: {report.level}")
    print(f"mode: {report.mode}")
    print(f"steps: {report.steps}")
    print(f"status: {'halted' if report.halted else 'timeout'}")
    print(f"final state: {report.final_state}")
    print(f"final tape: {report.final_tape!r}")
    print(f"final point: x={report.final_x} y={report.final_y}")
    if report.final_float is not None:
        fx, fy = report.final_float
        print(f"final point (float64): x={fx:.17g} y={fy:.17g}")
    if report.mode == "float64":
        if report.divergence_step is None:
            print("divergence from exact trace: none")
        else:
            print(f"divergence from exact trace: step {report.divergence_step}")


def cmd_run(args) -> int:
    m = _load_machine(args.machine)
    word = parse_word(m, args.word)
    report, (fields, rows) = run_level(m, word, args.level, args.max_steps,
                                       args.mode)
    if args.trace:
        _write_csv(args.trace, fields, rows)
    _print_report(report, args.format)
    return EXIT_OK


def cmd_compare(args) -> int:
    m = _load_machine(args.machine)
    word = parse_word(m, args.word)
    result = compare_levels(m, word, args.max_steps)
    if result.ok:
        status = "halted" if result.halted else "timeout"
        print(f"all levels agree over {result.steps} steps ({status})")
        return EXIT_OK
    t, ref, level, want, got = result.mismatch
    print(
        f"mismatch at step {t} between {ref} and {level}: "
        f"{ref}=({rat_str(want.x)}, {rat_str(want.y)}) "
        f"{level}=({rat_str(got.x)}, {rat_str(got.y)})",
        file=sys.stderr,
    )
    return EXIT_MISMATCH


def cmd_info(args) -> int:
    m = _load_machine(args.machine)
    net = network.build_network(nda.build_nda(m))
    n_q, n_s = m.n_states, m.n_symbols
    n_bsl = n_s + n_q * n_s
    n_ltl = 2 * n_q * n_s * n_s
    print(f"states: {n_q} ({' '.join(m.states)})")
    print(f"tape symbols: {n_s} ({' '.join(m.tape_symbols)}), blank: {m.blank}")
    print(f"cells: {n_q * n_s * n_s}, MCL: 2, BSL: {n_bsl}, LTL: {n_ltl}, "
          f"bias: 1, total: {net.n_units}")
    print(f"h: {rat_str(net.h)}")
    lambdas = {w for (s, d), w in net.weights.items()
               if s in (0, 1) and net.units[d].kind in (network.LTL_X, network.LTL_Y)}
    offsets = {w for (s, d), w in net.weights.items()
               if s == net.bias_id and net.units[d].kind in (network.LTL_X, network.LTL_Y)}
    thresholds = {-w for (s, d), w in net.weights.items()
                  if s == net.bias_id and net.units[d].kind in (network.BSL_X, network.BSL_Y)}
    thresholds.add(encode.Rational(0))  # zero thresholds are stored implicitly
    print(f"weights: {len(net.weights)} edges; values 1 and +-h/2, "
          f"{len(lambdas)} distinct scale weights, "
          f"{len(offsets)} distinct bias offsets, "
          f"{len(thresholds)} distinct thresholds")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tm2net",
        description="Compile Turing machines into generalized shifts, unit-square "
                    "affine maps, and threshold/ramp networks; run and cross-check "
                    "any level.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="write a compiled artifact")
    p.add_argument("machine", help="machine description file")
    p.add_argument("--target", choices=("gs", "nda", "net"), required=True)
    p.add_argument("--out", required=True, help="output path")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="run one level and report")
    p.add_argument("machine")
    p.add_argument("word", help="input word (symbols, or one token per character)")
    p.add_argument("--level", choices=LEVELS, default="tm")
    p.add_argument("--mode", choices=("exact", "float64"), default="exact")
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--trace", help="write the per-step trace CSV here")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run all levels in lockstep and compare")
    p.add_argument("machine")
    p.add_argument("word")
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("info", help="print sizes, unit counts, h, weight summary")
    p.add_argument("machine")
    p.set_defaults(func=cmd_info)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MachineError, EncodingError, NetworkFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
