//! Gate-level functional simulator.
//!
//! Combinational evaluation is a single topological pass. Sequential
//! netlists declare feedback arcs as state wires; a step re-evaluates the
//! netlist with state wires pinned to their previous values until they stop
//! changing (transparent-latch settling). Generated latches settle in at
//! most two passes; the bound below leaves margin for hand-written circuits
//! and turns genuine oscillation into an error instead of a silent cutoff.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::gates::{backward_slice, eval_slice};
use crate::netlist::{Netlist, Violation, WireSource, WireTable};
use crate::trace::{Logic, Trace, VectorSet};

pub const SETTLE_LIMIT: usize = 4;

/// Maximum number of free inputs `check_injective` will enumerate.
pub const INJECTIVITY_CAPACITY: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimState {
    pub values: BTreeMap<String, bool>,
    pub step: usize,
    /// Settling passes used by the step that produced this state.
    pub settle_iterations: usize,
}

impl SimState {
    /// Power-on state: every state wire holds `init`.
    pub fn initial(netlist: &Netlist, init: bool) -> SimState {
        SimState {
            values: netlist.state_wires.iter().map(|w| (w.clone(), init)).collect(),
            step: 0,
            settle_iterations: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid netlist: {0}")]
    Invalid(Violation),
    #[error("missing value for primary input `{0}`")]
    MissingInput(String),
    #[error("`{0}` is not a primary input of this netlist")]
    NotAnInput(String),
    #[error("state wires did not settle within {limit} iterations")]
    Oscillation { limit: usize },
    #[error("operation requires a combinational netlist (state wires present)")]
    NotCombinational,
    #[error("missing value for terminal wire `{0}`")]
    MissingTerminal(String),
    #[error("`{0}` is not a primary output or garbage wire")]
    NotATerminal(String),
    #[error("recovered constant on `{wire}` is {got}, declared {expected}")]
    ConstantMismatch { wire: String, expected: bool, got: bool },
    #[error("{inputs} free inputs exceed the exhaustive capacity of {max}")]
    Capacity { inputs: usize, max: usize },
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<SimError> },
}

// Wiring resolved to indices once per simulation.
struct Engine<'a> {
    netlist: &'a Netlist,
    table: WireTable,
    gate_ins: Vec<Vec<usize>>,
    gate_outs: Vec<Vec<usize>>,
    input_wires: Vec<usize>,
    state_wires: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(netlist: &'a Netlist) -> Result<Self, SimError> {
        let table = netlist
            .build_table()
            .map_err(|mut v| SimError::Invalid(v.remove(0)))?;
        let resolve = |ws: &[String]| ws.iter().map(|w| table.index[w]).collect::<Vec<_>>();
        let gate_ins = netlist.gates.iter().map(|g| resolve(&g.ins)).collect();
        let gate_outs = netlist.gates.iter().map(|g| resolve(&g.outs)).collect();
        let input_wires = resolve(&netlist.inputs);
        let state_wires = resolve(&netlist.state_wires);
        Ok(Engine { netlist, table, gate_ins, gate_outs, input_wires, state_wires })
    }

    fn seed_inputs(&self, inputs: &BTreeMap<String, bool>) -> Result<Vec<bool>, SimError> {
        for key in inputs.keys() {
            if !self.netlist.inputs.contains(key) {
                return Err(SimError::NotAnInput(key.clone()));
            }
        }
        self.netlist
            .inputs
            .iter()
            .map(|w| {
                inputs
                    .get(w)
                    .copied()
                    .ok_or_else(|| SimError::MissingInput(w.clone()))
            })
            .collect()
    }

    // One topological pass. State wires read from `state`; newly produced
    // state values are written to `next_state` instead of the value array.
    fn pass(&self, input_values: &[bool], state: &[bool], next_state: &mut [bool]) -> Vec<bool> {
        let mut values = vec![false; self.netlist.wires.len()];
        for (slot, &wi) in self.input_wires.iter().enumerate() {
            values[wi] = input_values[slot];
        }
        for c in &self.netlist.constants {
            values[self.table.index[&c.wire]] = c.value == 1;
        }
        for (slot, &wi) in self.state_wires.iter().enumerate() {
            values[wi] = state[slot];
        }
        let mut ins = Vec::with_capacity(4);
        for &g in &self.table.topo {
            ins.clear();
            ins.extend(self.gate_ins[g].iter().map(|&wi| values[wi]));
            let outs = eval_slice(self.netlist.gates[g].kind, &ins);
            for (&wi, &v) in self.gate_outs[g].iter().zip(&outs) {
                if let Some(slot) = self.state_wires.iter().position(|&s| s == wi) {
                    next_state[slot] = v;
                } else {
                    values[wi] = v;
                }
            }
        }
        values
    }

    fn settle(
        &self,
        input_values: &[bool],
        state: &mut Vec<bool>,
    ) -> Result<(Vec<bool>, usize), SimError> {
        let mut next = state.clone();
        for iteration in 1..=SETTLE_LIMIT {
            let values = self.pass(input_values, state, &mut next);
            if next == *state {
                return Ok((values, iteration));
            }
            state.clone_from(&next);
        }
        Err(SimError::Oscillation { limit: SETTLE_LIMIT })
    }

    fn state_from(&self, sim: &SimState) -> Vec<bool> {
        self.netlist
            .state_wires
            .iter()
            .map(|w| sim.values.get(w).copied().unwrap_or(false))
            .collect()
    }
}

/// Evaluate one step: settle the netlist for `inputs` starting from `state`.
pub fn step(
    netlist: &Netlist,
    state: &SimState,
    inputs: &BTreeMap<String, bool>,
) -> Result<SimState, SimError> {
    let engine = Engine::new(netlist)?;
    let input_values = engine.seed_inputs(inputs)?;
    let mut state_values = engine.state_from(state);
    let (values, iterations) = engine.settle(&input_values, &mut state_values)?;
    Ok(SimState {
        values: netlist
            .wires
            .iter()
            .map(|w| (w.clone(), values[engine.table.index[w]]))
            .collect(),
        step: state.step + 1,
        settle_iterations: iterations,
    })
}

/// Run a vector set from power-on (`init` on every state wire), recording
/// every wire at every step.
pub fn run(netlist: &Netlist, vectors: &VectorSet, init: bool) -> Result<Trace, SimError> {
    let engine = Engine::new(netlist)?;
    for col in &vectors.columns {
        if !netlist.inputs.contains(col) {
            return Err(SimError::NotAnInput(col.clone()));
        }
    }
    let mut columns = netlist.wires.clone();
    columns.sort();
    let order: Vec<usize> = columns.iter().map(|w| engine.table.index[w]).collect();
    let mut trace = Trace::new(columns);

    let mut state_values = vec![init; netlist.state_wires.len()];
    for row in 0..vectors.len() {
        let at = |source: SimError| SimError::AtStep { step: row, source: Box::new(source) };
        let assignment = vectors.assignment(row);
        let input_values = engine.seed_inputs(&assignment).map_err(at)?;
        let (values, _) = engine.settle(&input_values, &mut state_values).map_err(at)?;
        trace
            .steps
            .push(order.iter().map(|&wi| Logic::from_bool(values[wi])).collect());
    }
    Ok(trace)
}

/// Invert a combinational netlist: from a full assignment of primary outputs
/// and garbage wires, recover the unique input assignment. Constant wires
/// recovered along the way must match their declarations.
pub fn run_backward(
    netlist: &Netlist,
    terminals: &BTreeMap<String, bool>,
) -> Result<BTreeMap<String, bool>, SimError> {
    let engine = Engine::new(netlist)?;
    if !netlist.state_wires.is_empty() {
        return Err(SimError::NotCombinational);
    }

    let mut expected: HashSet<&str> = netlist.outputs.iter().map(|s| s.as_str()).collect();
    for (wi, src) in engine.table.sources.iter().enumerate() {
        if matches!(src, WireSource::Gate { .. }) && engine.table.sinks[wi].is_none() {
            expected.insert(netlist.wires[wi].as_str());
        }
    }
    for key in terminals.keys() {
        if !expected.contains(key.as_str()) {
            return Err(SimError::NotATerminal(key.clone()));
        }
    }

    let n = netlist.wires.len();
    let mut values: Vec<Option<bool>> = vec![None; n];
    for wire in &expected {
        let v = terminals
            .get(*wire)
            .copied()
            .ok_or_else(|| SimError::MissingTerminal(wire.to_string()))?;
        values[engine.table.index[*wire]] = Some(v);
    }

    let mut outs = Vec::with_capacity(4);
    for &g in engine.table.topo.iter().rev() {
        outs.clear();
        for &wi in &engine.gate_outs[g] {
            outs.push(values[wi].expect("reverse order guarantees outputs are known"));
        }
        let ins = backward_slice(netlist.gates[g].kind, &outs);
        for (&wi, &v) in engine.gate_ins[g].iter().zip(&ins) {
            values[wi] = Some(v);
        }
    }

    for c in &netlist.constants {
        let declared = c.value == 1;
        let got = values[engine.table.index[&c.wire]]
            .expect("constant wires feed gates, so inversion assigns them");
        if got != declared {
            return Err(SimError::ConstantMismatch {
                wire: c.wire.clone(),
                expected: declared,
                got,
            });
        }
    }

    Ok(netlist
        .inputs
        .iter()
        .filter_map(|w| values[engine.table.index[w]].map(|v| (w.clone(), v)))
        .collect())
}

/// Exhaustively check that distinct free-input assignments produce distinct
/// values on the primary outputs plus garbage wires.
pub fn check_injective(netlist: &Netlist) -> Result<bool, SimError> {
    let engine = Engine::new(netlist)?;
    if !netlist.state_wires.is_empty() {
        return Err(SimError::NotCombinational);
    }
    let free = netlist.inputs.len();
    if free > INJECTIVITY_CAPACITY {
        return Err(SimError::Capacity { inputs: free, max: INJECTIVITY_CAPACITY });
    }

    let mut terminal_wires: Vec<usize> = netlist
        .outputs
        .iter()
        .map(|w| engine.table.index[w])
        .collect();
    for (wi, src) in engine.table.sources.iter().enumerate() {
        if matches!(src, WireSource::Gate { .. }) && engine.table.sinks[wi].is_none() {
            terminal_wires.push(wi);
        }
    }

    let mut seen = HashSet::with_capacity(1 << free);
    let state = Vec::new();
    for pattern in 0u64..(1u64 << free) {
        let input_values: Vec<bool> = (0..free).map(|i| (pattern >> i) & 1 == 1).collect();
        let values = engine.pass(&input_values, &state, &mut state.clone());
        let key: Vec<bool> = terminal_wires.iter().map(|&wi| values[wi]).collect();
        if !seen.insert(key) {
            return Ok(false);
        }
    }
    Ok(true)
}
