//! Netlist data model for reversible circuits.
//!
//! A netlist is a set of named wires connected by gate instances. Wires obey
//! the reversible wiring discipline: exactly one source (a primary input, a
//! constant, or a gate output) and at most one sink (a gate input or a
//! primary output). Fan-out is a structural violation, never implicit.
//!
//! Feedback is explicit: a wire listed in `state_wires` may close a cycle
//! through a gate; with state wires removed the gate graph must be acyclic.
//!
//! The serialized form is JSON with this exact shape:
//!
//! ```json
//! {
//!   "name": "...",
//!   "wires": ["..."],
//!   "inputs": ["..."],
//!   "outputs": ["..."],
//!   "constants": [{"wire": "...", "value": 0}],
//!   "gates": [{"id": "...", "kind": "NP", "ins": ["..."], "outs": ["..."]}],
//!   "state_wires": ["..."],
//!   "meta": {}
//! }
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::GateKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstBinding {
    pub wire: String,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateInstance {
    pub id: String,
    pub kind: GateKind,
    pub ins: Vec<String>,
    pub outs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Netlist {
    pub name: String,
    pub wires: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub constants: Vec<ConstBinding>,
    pub gates: Vec<GateInstance>,
    pub state_wires: Vec<String>,
    #[serde(default = "default_meta")]
    pub meta: serde_json::Value,
}

fn default_meta() -> serde_json::Value {
    serde_json::Value::Object(serde_json::Map::new())
}

/// A structural rule broken by a netlist. Violations are data, not errors:
/// `validate` reports all of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateWire(String),
    DuplicateGate(String),
    UnknownWire { wire: String, context: String },
    NoSource(String),
    MultipleSources(String),
    FanOut(String),
    PortCountMismatch { gate: String, expected: usize, ins: usize, outs: usize },
    ConstantValueOutOfRange { wire: String, value: u8 },
    ConstantAsPort(String),
    BadStateWire(String),
    Cycle(Vec<String>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateWire(w) => write!(f, "duplicate wire id `{w}`"),
            Violation::DuplicateGate(g) => write!(f, "duplicate gate id `{g}`"),
            Violation::UnknownWire { wire, context } => {
                write!(f, "unknown wire `{wire}` referenced by {context}")
            }
            Violation::NoSource(w) => write!(f, "wire `{w}` has no source"),
            Violation::MultipleSources(w) => write!(f, "wire `{w}` has more than one source"),
            Violation::FanOut(w) => write!(f, "wire `{w}` has more than one sink (fan-out)"),
            Violation::PortCountMismatch { gate, expected, ins, outs } => write!(
                f,
                "gate `{gate}` needs {expected} ins and outs, has {ins} ins / {outs} outs"
            ),
            Violation::ConstantValueOutOfRange { wire, value } => {
                write!(f, "constant on `{wire}` has value {value}, expected 0 or 1")
            }
            Violation::ConstantAsPort(w) => {
                write!(f, "constant wire `{w}` also listed as primary input or output")
            }
            Violation::BadStateWire(w) => write!(
                f,
                "state wire `{w}` must run from a gate output to a gate input"
            ),
            Violation::Cycle(gates) => {
                write!(f, "combinational cycle through gates {}", gates.join(", "))
            }
        }
    }
}

/// Where a wire's value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireSource {
    Input(usize),
    Constant(bool),
    Gate { gate: usize, port: usize },
}

/// Where a wire's value goes, if anywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireSink {
    Output(usize),
    Gate { gate: usize, port: usize },
}

/// Resolved wiring of a valid netlist: per-wire source/sink plus a
/// topological order of the gates with state arcs cut.
#[derive(Debug, Clone)]
pub struct WireTable {
    pub index: HashMap<String, usize>,
    pub sources: Vec<WireSource>,
    pub sinks: Vec<Option<WireSink>>,
    pub state: HashSet<usize>,
    pub topo: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemaError {
    #[error("malformed circuit JSON: {0}")]
    Json(String),
}

impl Netlist {
    /// Check every structural rule and return all violations found.
    pub fn validate(&self) -> Vec<Violation> {
        match self.build_table() {
            Ok(_) => Vec::new(),
            Err(v) => v,
        }
    }

    /// Resolve wiring, failing with the full violation list.
    pub(crate) fn build_table(&self) -> Result<WireTable, Vec<Violation>> {
        let mut violations = Vec::new();

        let mut index = HashMap::new();
        for (i, w) in self.wires.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                violations.push(Violation::DuplicateWire(w.clone()));
            }
        }
        let mut gate_ids = HashSet::new();
        for g in &self.gates {
            if !gate_ids.insert(&g.id) {
                violations.push(Violation::DuplicateGate(g.id.clone()));
            }
        }

        let check_known = |wire: &str, context: String, violations: &mut Vec<Violation>| {
            if !index.contains_key(wire) {
                violations.push(Violation::UnknownWire { wire: wire.to_string(), context });
            }
        };
        for w in &self.inputs {
            check_known(w, "inputs".into(), &mut violations);
        }
        for w in &self.outputs {
            check_known(w, "outputs".into(), &mut violations);
        }
        for c in &self.constants {
            check_known(&c.wire, "constants".into(), &mut violations);
            if c.value > 1 {
                violations.push(Violation::ConstantValueOutOfRange {
                    wire: c.wire.clone(),
                    value: c.value,
                });
            }
        }
        for w in &self.state_wires {
            check_known(w, "state_wires".into(), &mut violations);
        }
        for g in &self.gates {
            for w in g.ins.iter().chain(&g.outs) {
                check_known(w, format!("gate `{}`", g.id), &mut violations);
            }
            let expected = g.kind.width();
            if g.ins.len() != expected || g.outs.len() != expected {
                violations.push(Violation::PortCountMismatch {
                    gate: g.id.clone(),
                    expected,
                    ins: g.ins.len(),
                    outs: g.outs.len(),
                });
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }

        // Sources: each wire must have exactly one.
        let n = self.wires.len();
        let mut sources: Vec<Vec<WireSource>> = vec![Vec::new(); n];
        for (i, w) in self.inputs.iter().enumerate() {
            sources[index[w]].push(WireSource::Input(i));
        }
        for c in &self.constants {
            sources[index[&c.wire]].push(WireSource::Constant(c.value == 1));
        }
        for (gi, g) in self.gates.iter().enumerate() {
            for (port, w) in g.outs.iter().enumerate() {
                sources[index[w]].push(WireSource::Gate { gate: gi, port });
            }
        }

        // Sinks: at most one (no fan-out).
        let mut sinks: Vec<Vec<WireSink>> = vec![Vec::new(); n];
        for (i, w) in self.outputs.iter().enumerate() {
            sinks[index[w]].push(WireSink::Output(i));
        }
        for (gi, g) in self.gates.iter().enumerate() {
            for (port, w) in g.ins.iter().enumerate() {
                sinks[index[w]].push(WireSink::Gate { gate: gi, port });
            }
        }

        for (i, w) in self.wires.iter().enumerate() {
            match sources[i].len() {
                0 => violations.push(Violation::NoSource(w.clone())),
                1 => {}
                _ => violations.push(Violation::MultipleSources(w.clone())),
            }
            if sinks[i].len() > 1 {
                violations.push(Violation::FanOut(w.clone()));
            }
        }

        let const_wires: HashSet<&String> = self.constants.iter().map(|c| &c.wire).collect();
        for w in self.inputs.iter().chain(&self.outputs) {
            if const_wires.contains(w) {
                violations.push(Violation::ConstantAsPort(w.clone()));
            }
        }

        let state: HashSet<usize> = self.state_wires.iter().map(|w| index[w]).collect();
        for w in &self.state_wires {
            let i = index[w];
            let from_gate = matches!(sources[i].first(), Some(WireSource::Gate { .. }));
            let to_gate = matches!(sinks[i].first(), Some(WireSink::Gate { .. }));
            if !(from_gate && to_gate) {
                violations.push(Violation::BadStateWire(w.clone()));
            }
        }

        if !violations.is_empty() {
            return Err(violations);
        }

        // Topological order over gates, ignoring state arcs.
        let mut indegree = vec![0usize; self.gates.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for (wi, src) in sources.iter().enumerate() {
            if state.contains(&wi) {
                continue;
            }
            if let (Some(WireSource::Gate { gate: from, .. }), Some(WireSink::Gate { gate: to, .. })) =
                (src.first(), sinks[wi].first())
            {
                succ[*from].push(*to);
                indegree[*to] += 1;
            }
        }
        let mut ready: Vec<usize> = (0..self.gates.len()).filter(|&g| indegree[g] == 0).collect();
        let mut topo = Vec::with_capacity(self.gates.len());
        while let Some(g) = ready.pop() {
            topo.push(g);
            for &next in &succ[g] {
                indegree[next] -= 1;
                if indegree[next] == 0 {
                    ready.push(next);
                }
            }
        }
        if topo.len() != self.gates.len() {
            let stuck: Vec<String> = (0..self.gates.len())
                .filter(|&g| indegree[g] > 0)
                .map(|g| self.gates[g].id.clone())
                .collect();
            return Err(vec![Violation::Cycle(stuck)]);
        }

        Ok(WireTable {
            index,
            sources: sources.into_iter().map(|mut v| v.remove(0)).collect(),
            sinks: sinks.into_iter().map(|mut v| v.pop()).collect(),
            state,
            topo,
        })
    }

    /// Copy with wires, gates, constants and state wires sorted by id.
    /// Input/output order is semantic and preserved.
    pub fn canonicalized(&self) -> Netlist {
        let mut out = self.clone();
        out.wires.sort();
        out.constants.sort_by(|a, b| a.wire.cmp(&b.wire));
        out.gates.sort_by(|a, b| a.id.cmp(&b.id));
        out.state_wires.sort();
        out
    }

    /// Canonical pretty JSON, stable byte-for-byte for a given netlist.
    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.canonicalized())
            .expect("netlist serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Netlist, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))
    }

    pub fn constant_value(&self, wire: &str) -> Option<bool> {
        self.constants.iter().find(|c| c.wire == wire).map(|c| c.value == 1)
    }

    pub fn gate(&self, id: &str) -> Option<&GateInstance> {
        self.gates.iter().find(|g| g.id == id)
    }
}
