"""tm2net: Turing machines compiled to shifts, unit-square affine maps,
and first-order threshold/ramp networks, cross-checked exactly at every level."""

from .encode import (
    Point,
    Rational,
    decode_left,
    decode_point,
    decode_right,
    encode_config,
    encode_left,
    encode_right,
    parse_rat,
    rat_str,
)
from .gshift import GeneralizedShift, Triple, build_gshift, dump_rules, gs_step, run_gs
from .machine import (
    Config,
    TuringMachine,
    initial_config,
    machine_to_text,
    parse_machine,
    run_tm,
    tape_string,
    tm_step,
)
from .nda import Branch, Nda, Partition, build_nda, build_partition, cell_of_point, derive_branch, nda_step, run_nda
from .network import (
    Network,
    NetState,
    build_network,
    export_network,
    import_network,
    initial_state,
    is_halted,
    net_step,
    run_network,
    unit_count,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "Config",
    "GeneralizedShift",
    "Nda",
    "NetState",
    "Network",
    "Partition",
    "Point",
    "Rational",
    "Triple",
    "TuringMachine",
    "build_gshift",
    "build_nda",
    "build_network",
    "build_partition",
    "cell_of_point",
    "decode_left",
    "decode_point",
    "decode_right",
    "derive_branch",
    "dump_rules",
    "encode_config",
    "encode_left",
    "encode_right",
    "export_network",
    "gs_step",
    "import_network",
    "initial_config",
    "initial_state",
    "is_halted",
    "machine_to_text",
    "nda_step",
    "net_step",
    "parse_machine",
    "parse_rat",
    "rat_str",
    "run_gs",
    "run_nda",
    "run_network",
    "run_tm",
    "tape_string",
    "tm_step",
    "unit_count",
]
