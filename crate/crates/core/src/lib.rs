//! Reversible-logic netlist toolkit.
//!
//! The crate models reversible circuits as explicit netlists over a small
//! gate library (NOT, Feynman, Fredkin, Toffoli, HL, NP), generates the
//! standard building blocks (one-hot decoders, NP-gate D latches, and a
//! full 2^n x m ROM), and verifies them three ways:
//!
//! * mechanical cost accounting (gates, quantum cost, transistors, garbage
//!   outputs, constant inputs, logical depth) with closed-form cross-checks
//!   for the ROM family;
//! * a functional simulator with level-sensitive latch settling, backward
//!   (inverse) evaluation and exhaustive injectivity checking;
//! * a switch-level simulator running the pass-transistor realizations of
//!   the gates, elaborated from the same netlists.

pub mod cost;
pub mod gates;
pub mod io;
pub mod netlist;
pub mod simfunc;
pub mod switchsim;
pub mod synth;
pub mod trace;

pub use cost::{analyze, analyze_with, garbage_wires, longest_path, CostReport};
pub use gates::{
    eval_backward, eval_gate, is_reversible, metadata, truth_table, Bits, CostModel, GateKind,
    GateSpec,
};
pub use netlist::{ConstBinding, GateInstance, Netlist, Violation};
pub use simfunc::{check_injective, run, run_backward, step, SimState};
pub use switchsim::{elaborate, equivalence, gate_netlist, run_switch, solve, SwitchNetlist};
pub use synth::{
    build_decoder, build_dff, build_rom, crosscheck, single_gate, thm1_transistors, thm2_gates,
    thm3_garbage, thm4_transistors, RomParams, TheoremReport,
};
pub use trace::{Logic, Trace, VectorSet};
