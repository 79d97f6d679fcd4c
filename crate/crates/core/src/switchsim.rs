//! Switch-level MOS simulator for the pass-transistor gate realizations.
//!
//! The model is purely logical: an NMOS conducts when its gate reads 1, a
//! PMOS when it reads 0, and a gate reference may read the complement of a
//! net for free (the dual-rail convention, the same accounting that prices
//! a Fredkin mux pair at 4 transistors). Each solve step repeatedly groups
//! nets into maximal conducting components and lets the strongest source in
//! a component win: rails beat inputs beat stored charge. A component with
//! no source keeps its per-net stored values, which is exactly the charge
//! retention that makes the NP-gate latch hold.
//!
//! Reference transistor netlists for the five realized gates live in
//! `data/*.tn` using a line-oriented format:
//!
//! ```text
//! RAIL VDD 1
//! IN A           # port input, in port order
//! IN An !A       # complement input net, derived from A
//! NET X          # internal net
//! OUT Q          # output, in port order (may name an input net)
//! T t1 P g=!A s=B d=Q
//! ```
//!
//! Degraded levels, sizing and timing are out of scope; the only dynamic
//! behavior modeled is ideal, indefinite charge retention.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use thiserror::Error;

use crate::gates::{eval_gate, Bits, GateKind};
use crate::netlist::{Netlist, Violation, WireSource};
use crate::trace::{Logic, Trace, VectorSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MosKind {
    Nmos,
    Pmos,
}

/// A net reference, optionally through the free dual-rail complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetRef {
    pub net: String,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transistor {
    pub id: String,
    pub kind: MosKind,
    pub gate: NetRef,
    pub src: String,
    pub drn: String,
}

/// Flat transistor-level circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchNetlist {
    pub name: String,
    /// All nets, sorted.
    pub nets: Vec<String>,
    pub rails: Vec<(String, bool)>,
    /// Port inputs, in port order.
    pub inputs: Vec<String>,
    /// Derived complement inputs: (net, base input).
    pub complements: Vec<(String, String)>,
    /// Output nets, in port order; may alias input nets (wired-through ports).
    pub outputs: Vec<String>,
    pub transistors: Vec<Transistor>,
}

/// Driving strength; later steps only ever weaken a net back to `Stored`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strength {
    Stored,
    Input,
    Rail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetValue {
    pub logic: Logic,
    pub strength: Strength,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwitchError {
    #[error("invalid netlist: {0}")]
    Invalid(Violation),
    #[error("no transistor realization for {0}")]
    UnsupportedKind(GateKind),
    #[error("gate `{gate}` needs the complement of an internal signal on port {port}")]
    ComplementUnavailable { gate: String, port: usize },
    #[error("transistor netlist parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("conflicting drivers across nets [{}]", nets.join(", "))]
    Conflict { nets: Vec<String> },
    #[error("switch network did not settle within {limit} iterations")]
    Oscillation { limit: usize },
    #[error("missing value for input net `{0}`")]
    MissingInput(String),
    #[error("`{0}` is not an input net")]
    NotAnInput(String),
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<SolveError> },
}

// ---------------------------------------------------------------------------
// file format

/// Parse the line-oriented transistor netlist format.
pub fn parse_netlist(text: &str, name: &str) -> Result<SwitchNetlist, SwitchError> {
    let err = |line: usize, message: String| SwitchError::Parse { line: line + 1, message };
    let mut nets: Vec<String> = Vec::new();
    let mut known: HashSet<String> = HashSet::new();
    let mut rails = Vec::new();
    let mut inputs = Vec::new();
    let mut complements = Vec::new();
    let mut outputs = Vec::new();
    let mut transistors: Vec<Transistor> = Vec::new();

    let declare = |net: &str, line: usize, nets: &mut Vec<String>, known: &mut HashSet<String>| {
        if !known.insert(net.to_string()) {
            return Err(err(line, format!("net `{net}` declared twice")));
        }
        nets.push(net.to_string());
        Ok(())
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "RAIL" => {
                if fields.len() != 3 || !matches!(fields[2], "0" | "1") {
                    return Err(err(lineno, "expected `RAIL <net> <0|1>`".into()));
                }
                declare(fields[1], lineno, &mut nets, &mut known)?;
                rails.push((fields[1].to_string(), fields[2] == "1"));
            }
            "IN" => match fields.len() {
                2 => {
                    declare(fields[1], lineno, &mut nets, &mut known)?;
                    inputs.push(fields[1].to_string());
                }
                3 => {
                    let base = fields[2]
                        .strip_prefix('!')
                        .ok_or_else(|| err(lineno, "expected `IN <net> !<base>`".into()))?;
                    if !inputs.iter().any(|i| i == base) {
                        return Err(err(lineno, format!("complement base `{base}` is not an input")));
                    }
                    declare(fields[1], lineno, &mut nets, &mut known)?;
                    complements.push((fields[1].to_string(), base.to_string()));
                }
                _ => return Err(err(lineno, "expected `IN <net> [!<base>]`".into())),
            },
            "NET" => {
                if fields.len() != 2 {
                    return Err(err(lineno, "expected `NET <net>`".into()));
                }
                declare(fields[1], lineno, &mut nets, &mut known)?;
            }
            "OUT" => {
                if fields.len() != 2 || !known.contains(fields[1]) {
                    return Err(err(lineno, "expected `OUT <declared-net>`".into()));
                }
                outputs.push(fields[1].to_string());
            }
            "T" => {
                if fields.len() != 6 {
                    return Err(err(lineno, "expected `T <id> <N|P> g=<net> s=<net> d=<net>`".into()));
                }
                let id = fields[1].to_string();
                if transistors.iter().any(|t| t.id == id) {
                    return Err(err(lineno, format!("transistor `{id}` declared twice")));
                }
                let kind = match fields[2] {
                    "N" => MosKind::Nmos,
                    "P" => MosKind::Pmos,
                    other => return Err(err(lineno, format!("unknown transistor kind `{other}`"))),
                };
                let field = |prefix: &str, text: &str| -> Result<String, SwitchError> {
                    text.strip_prefix(prefix)
                        .map(str::to_string)
                        .ok_or_else(|| err(lineno, format!("expected `{prefix}<net>`, got `{text}`")))
                };
                let g = field("g=", fields[3])?;
                let (gate_net, inverted) = match g.strip_prefix('!') {
                    Some(base) => (base.to_string(), true),
                    None => (g, false),
                };
                let src = field("s=", fields[4])?;
                let drn = field("d=", fields[5])?;
                for net in [&gate_net, &src, &drn] {
                    if !known.contains(net) {
                        return Err(err(lineno, format!("undeclared net `{net}`")));
                    }
                }
                // src == drn is tolerated: joining a latch feedback wire
                // onto its own gate port aliases the two terminals, and the
                // resulting edge is a harmless no-op for conduction
                transistors.push(Transistor {
                    id,
                    kind,
                    gate: NetRef { net: gate_net, inverted },
                    src,
                    drn,
                });
            }
            other => return Err(err(lineno, format!("unknown declaration `{other}`"))),
        }
    }

    nets.sort();
    Ok(SwitchNetlist {
        name: name.to_string(),
        nets,
        rails,
        inputs,
        complements,
        outputs,
        transistors,
    })
}

/// Serialize back to the line-oriented format.
pub fn write_netlist(sw: &SwitchNetlist) -> String {
    let mut out = String::new();
    for (net, value) in &sw.rails {
        out.push_str(&format!("RAIL {net} {}\n", u8::from(*value)));
    }
    for net in &sw.inputs {
        out.push_str(&format!("IN {net}\n"));
    }
    for (net, base) in &sw.complements {
        out.push_str(&format!("IN {net} !{base}\n"));
    }
    let declared: HashSet<&String> = sw
        .rails
        .iter()
        .map(|(n, _)| n)
        .chain(sw.inputs.iter())
        .chain(sw.complements.iter().map(|(n, _)| n))
        .collect();
    for net in &sw.nets {
        if !declared.contains(net) {
            out.push_str(&format!("NET {net}\n"));
        }
    }
    for net in &sw.outputs {
        out.push_str(&format!("OUT {net}\n"));
    }
    for t in &sw.transistors {
        let kind = match t.kind {
            MosKind::Nmos => "N",
            MosKind::Pmos => "P",
        };
        let bang = if t.gate.inverted { "!" } else { "" };
        out.push_str(&format!(
            "T {} {kind} g={bang}{} s={} d={}\n",
            t.id, t.gate.net, t.src, t.drn
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// reference gate netlists

/// The transistor realization of `kind`. Supported kinds and their exact
/// transistor counts: FEYNMAN 3, FREDKIN 4, TOFFOLI 5, NP 9, HL 13.
pub fn gate_netlist(kind: GateKind) -> Result<SwitchNetlist, SwitchError> {
    static CACHE: OnceLock<BTreeMap<GateKind, SwitchNetlist>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let sources = [
            (GateKind::Feynman, include_str!("../data/feynman.tn")),
            (GateKind::Fredkin, include_str!("../data/fredkin.tn")),
            (GateKind::Toffoli, include_str!("../data/toffoli.tn")),
            (GateKind::Np, include_str!("../data/np.tn")),
            (GateKind::Hl, include_str!("../data/hl.tn")),
        ];
        sources
            .into_iter()
            .map(|(kind, text)| {
                let sw = parse_netlist(text, &kind.name().to_lowercase())
                    .expect("bundled netlists parse");
                assert_eq!(sw.inputs.len(), kind.width(), "{kind} port inputs");
                assert_eq!(sw.outputs.len(), kind.width(), "{kind} port outputs");
                assert!(
                    sw.transistors.iter().all(|t| t.src != t.drn),
                    "{kind} reference netlist shorts a transistor"
                );
                (kind, sw)
            })
            .collect()
    });
    cache
        .get(&kind)
        .cloned()
        .ok_or(SwitchError::UnsupportedKind(kind))
}

// ---------------------------------------------------------------------------
// solver

struct Solver<'a> {
    sw: &'a SwitchNetlist,
    index: HashMap<&'a str, usize>,
    // (gate net, inverted, src, drn, kind)
    devices: Vec<(usize, bool, usize, usize, MosKind)>,
    pins: Vec<Option<(Logic, Strength)>>,
}

impl<'a> Solver<'a> {
    fn new(sw: &'a SwitchNetlist) -> Solver<'a> {
        let index: HashMap<&str, usize> =
            sw.nets.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let devices = sw
            .transistors
            .iter()
            .map(|t| {
                (
                    index[t.gate.net.as_str()],
                    t.gate.inverted,
                    index[t.src.as_str()],
                    index[t.drn.as_str()],
                    t.kind,
                )
            })
            .collect();
        Solver { sw, index, devices, pins: vec![None; sw.nets.len()] }
    }

    fn pin_inputs(&mut self, inputs: &BTreeMap<String, bool>) -> Result<(), SolveError> {
        for key in inputs.keys() {
            if !self.sw.inputs.contains(key) {
                return Err(SolveError::NotAnInput(key.clone()));
            }
        }
        self.pins = vec![None; self.sw.nets.len()];
        for (net, value) in &self.sw.rails {
            self.pins[self.index[net.as_str()]] = Some((Logic::from_bool(*value), Strength::Rail));
        }
        for net in &self.sw.inputs {
            let v = *inputs
                .get(net)
                .ok_or_else(|| SolveError::MissingInput(net.clone()))?;
            self.pins[self.index[net.as_str()]] = Some((Logic::from_bool(v), Strength::Input));
        }
        for (net, base) in &self.sw.complements {
            let v = inputs[base];
            self.pins[self.index[net.as_str()]] = Some((Logic::from_bool(!v), Strength::Input));
        }
        Ok(())
    }

    fn conducts(&self, device: usize, values: &[NetValue]) -> bool {
        let (gate, inverted, _, _, kind) = self.devices[device];
        let mut read = values[gate].logic;
        if inverted {
            read = read.invert();
        }
        match kind {
            MosKind::Nmos => read == Logic::One,
            MosKind::Pmos => read == Logic::Zero,
        }
    }

    fn solve(&self, prev: &BTreeMap<String, Logic>) -> Result<Vec<NetValue>, SolveError> {
        let n = self.sw.nets.len();
        let mut values: Vec<NetValue> = (0..n)
            .map(|i| match self.pins[i] {
                Some((logic, strength)) => NetValue { logic, strength },
                None => NetValue {
                    logic: prev.get(&self.sw.nets[i]).copied().unwrap_or(Logic::Zero),
                    strength: Strength::Stored,
                },
            })
            .collect();

        let limit = n.max(4);
        for _ in 0..limit {
            // maximal conducting components
            let mut uf = UnionFind::new(n);
            for d in 0..self.devices.len() {
                if self.conducts(d, &values) {
                    let (_, _, s, t, _) = self.devices[d];
                    uf.union(s, t);
                }
            }
            let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
            for i in 0..n {
                members.entry(uf.find(i)).or_default().push(i);
            }

            let mut next = values.clone();
            for group in members.values() {
                let best = group
                    .iter()
                    .filter_map(|&i| self.pins[i].map(|(_, s)| s))
                    .max();
                let Some(strength) = best else {
                    // undriven: every member keeps its charge
                    for &i in group {
                        next[i] = NetValue { logic: values[i].logic, strength: Strength::Stored };
                    }
                    continue;
                };
                let drivers: Vec<Logic> = group
                    .iter()
                    .filter_map(|&i| match self.pins[i] {
                        Some((logic, s)) if s == strength => Some(logic),
                        _ => None,
                    })
                    .collect();
                if drivers.iter().any(|&v| v != drivers[0]) {
                    return Err(SolveError::Conflict {
                        nets: group.iter().map(|&i| self.sw.nets[i].clone()).collect(),
                    });
                }
                for &i in group {
                    if self.pins[i].is_none() {
                        next[i] = NetValue { logic: drivers[0], strength };
                    }
                }
            }

            if next == values {
                return Ok(values);
            }
            values = next;
        }
        Err(SolveError::Oscillation { limit })
    }
}

// minimal union-find, path halving
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Settle the network for one input assignment. `prev` supplies stored
/// charge for dynamic nets; missing nets default to 0.
pub fn solve(
    sw: &SwitchNetlist,
    inputs: &BTreeMap<String, bool>,
    prev: &BTreeMap<String, Logic>,
) -> Result<BTreeMap<String, NetValue>, SolveError> {
    let mut solver = Solver::new(sw);
    solver.pin_inputs(inputs)?;
    let values = solver.solve(prev)?;
    Ok(sw
        .nets
        .iter()
        .cloned()
        .zip(values)
        .collect())
}

/// Run a vector sequence, carrying net charge between steps. Nets named in
/// `init` start with that charge; everything else starts at 0.
pub fn run_switch(
    sw: &SwitchNetlist,
    vectors: &VectorSet,
    init: &BTreeMap<String, Logic>,
) -> Result<Trace, SolveError> {
    let mut solver = Solver::new(sw);
    let mut trace = Trace::new(sw.nets.clone());
    let mut charge: BTreeMap<String, Logic> = init.clone();
    for row in 0..vectors.len() {
        let at = |source: SolveError| SolveError::AtStep { step: row, source: Box::new(source) };
        solver.pin_inputs(&vectors.assignment(row)).map_err(at)?;
        let values = solver.solve(&charge).map_err(at)?;
        trace.steps.push(values.iter().map(|v| v.logic).collect());
        charge = sw
            .nets
            .iter()
            .cloned()
            .zip(values.iter().map(|v| v.logic))
            .collect();
    }
    Ok(trace)
}

// ---------------------------------------------------------------------------
// equivalence against the gate semantics

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceFailure {
    pub inputs: Bits,
    pub expected: Bits,
    pub got: Vec<Logic>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub kind: GateKind,
    pub passed: bool,
    pub counterexample: Option<EquivalenceFailure>,
}

/// Exhaustively compare the transistor realization of `kind` against
/// `eval_gate`. Any conflict, oscillation or floating output is a failure
/// with the offending input row attached.
pub fn equivalence(kind: GateKind) -> EquivalenceReport {
    let failed = |inputs: Bits, expected: Bits, got: Vec<Logic>, detail: String| EquivalenceReport {
        kind,
        passed: false,
        counterexample: Some(EquivalenceFailure { inputs, expected, got, detail }),
    };

    let sw = match gate_netlist(kind) {
        Ok(sw) => sw,
        Err(e) => {
            return failed(Bits::new(vec![]), Bits::new(vec![]), vec![], e.to_string());
        }
    };
    let width = kind.width();
    for row in 0..1usize << width {
        let input_bits = Bits::from_index(width, row);
        let expected = eval_gate(kind, &input_bits).expect("width matches");
        let assignment: BTreeMap<String, bool> = sw
            .inputs
            .iter()
            .cloned()
            .zip(input_bits.as_slice().iter().copied())
            .collect();
        let state = match solve(&sw, &assignment, &BTreeMap::new()) {
            Ok(state) => state,
            Err(e) => return failed(input_bits, expected, vec![], e.to_string()),
        };
        let got: Vec<Logic> = sw.outputs.iter().map(|net| state[net].logic).collect();
        for (port, net) in sw.outputs.iter().enumerate() {
            if state[net].strength == Strength::Stored {
                let detail = format!("output `{net}` (port {port}) is floating");
                return failed(input_bits, expected, got, detail);
            }
        }
        let matches = got
            .iter()
            .zip(expected.as_slice())
            .all(|(g, &e)| g.to_bool() == Some(e));
        if !matches {
            return failed(input_bits, expected, got, "output mismatch".into());
        }
    }
    EquivalenceReport { kind, passed: true, counterexample: None }
}

// ---------------------------------------------------------------------------
// elaboration

/// A gate-level netlist lowered to transistors, with the wire-to-net map
/// needed to line traces up against the functional simulator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elaborated {
    pub netlist: SwitchNetlist,
    pub wire_nets: BTreeMap<String, String>,
    /// Nets backing declared state wires, for power-on initialization.
    pub state_nets: Vec<String>,
}

/// Replace every gate instance with its transistor realization. Wire joins
/// become shared nets, constants collapse onto the rails, and wired-through
/// ports alias their input net. A dual-rail complement can only be taken of
/// a rail or of a circuit primary input.
pub fn elaborate(netlist: &Netlist) -> Result<Elaborated, SwitchError> {
    let table = netlist
        .build_table()
        .map_err(|mut v| SwitchError::Invalid(v.remove(0)))?;

    // key space: 0 = VDD, 1 = GND, then circuit wires, then instance nets
    const VDD: usize = 0;
    const GND: usize = 1;
    let wire_key = |wi: usize| 2 + wi;
    let mut key_count = 2 + netlist.wires.len();
    let mut uf = UnionFind::new(key_count);
    let grow = |uf: &mut UnionFind, count: &mut usize| {
        uf.parent.push(*count);
        *count += 1;
        *count - 1
    };

    for c in &netlist.constants {
        let rail = if c.value == 1 { VDD } else { GND };
        uf.union(wire_key(table.index[&c.wire]), rail);
    }

    struct Pending {
        gate: usize,
        port: usize,
        comp_key: usize,
    }
    let mut pending: Vec<Pending> = Vec::new();
    // per instance: reference-net name -> key
    let mut instance_keys: Vec<HashMap<String, usize>> = Vec::new();
    let mut references: Vec<SwitchNetlist> = Vec::new();

    for (gi, gate) in netlist.gates.iter().enumerate() {
        let reference = gate_netlist(gate.kind)?;
        let mut keys: HashMap<String, usize> = HashMap::new();
        for (port, net) in reference.inputs.iter().enumerate() {
            keys.insert(net.clone(), wire_key(table.index[&gate.ins[port]]));
        }
        for (net, value) in &reference.rails {
            keys.insert(net.clone(), if *value { VDD } else { GND });
        }
        for (net, base) in &reference.complements {
            // resolved after the union-find settles; remember the base port
            let port = reference.inputs.iter().position(|i| i == base).expect("parser checked");
            let comp_key = grow(&mut uf, &mut key_count);
            keys.insert(net.clone(), comp_key);
            pending.push(Pending { gate: gi, port, comp_key });
        }
        for net in &reference.nets {
            if !keys.contains_key(net) {
                keys.insert(net.clone(), grow(&mut uf, &mut key_count));
            }
        }
        // join each output port's reference net onto the driven wire
        for (port, net) in reference.outputs.iter().enumerate() {
            uf.union(keys[net.as_str()], wire_key(table.index[&gate.outs[port]]));
        }
        instance_keys.push(keys);
        references.push(reference);
    }

    // resolve dual-rail complements now that aliases are final
    let input_wires: HashSet<usize> = netlist.inputs.iter().map(|w| table.index[w]).collect();
    let mut complement_of_input: HashMap<usize, usize> = HashMap::new(); // wire idx -> comp key
    let mut complement_pairs: Vec<(usize, usize)> = Vec::new(); // (comp key, input wire idx)
    for p in &pending {
        let base_root = uf.find(wire_key(table.index[&netlist.gates[p.gate].ins[p.port]]));
        if base_root == uf.find(VDD) {
            uf.union(p.comp_key, GND);
        } else if base_root == uf.find(GND) {
            uf.union(p.comp_key, VDD);
        } else if let Some(&wi) = input_wires
            .iter()
            .find(|&&wi| uf.find(wire_key(wi)) == base_root)
        {
            match complement_of_input.get(&wi) {
                Some(&existing) => uf.union(p.comp_key, existing),
                None => {
                    complement_of_input.insert(wi, p.comp_key);
                    complement_pairs.push((p.comp_key, wi));
                }
            }
        } else {
            return Err(SwitchError::ComplementUnavailable {
                gate: netlist.gates[p.gate].id.clone(),
                port: p.port,
            });
        }
    }

    // canonical names per class, claimed in priority order: rails, primary
    // inputs and their complements, output wires, remaining wires by name,
    // then instance-local nets as `gate.refnet`
    let mut names: HashMap<usize, String> = HashMap::new();
    fn claim(names: &mut HashMap<usize, String>, root: usize, name: String) {
        names.entry(root).or_insert(name);
    }
    claim(&mut names, uf.find(VDD), "VDD".into());
    claim(&mut names, uf.find(GND), "GND".into());
    for w in &netlist.inputs {
        claim(&mut names, uf.find(wire_key(table.index[w])), w.clone());
    }
    for (comp_key, wi) in &complement_pairs {
        claim(&mut names, uf.find(*comp_key), format!("~{}", netlist.wires[*wi]));
    }
    for w in &netlist.outputs {
        claim(&mut names, uf.find(wire_key(table.index[w])), w.clone());
    }
    let mut sorted_wires: Vec<usize> = (0..netlist.wires.len()).collect();
    sorted_wires.sort_by(|&a, &b| netlist.wires[a].cmp(&netlist.wires[b]));
    for wi in sorted_wires {
        claim(&mut names, uf.find(wire_key(wi)), netlist.wires[wi].clone());
    }
    for (gi, keys) in instance_keys.iter().enumerate() {
        let gate_id = &netlist.gates[gi].id;
        let mut local: Vec<(&String, &usize)> = keys.iter().collect();
        local.sort();
        for (refnet, &key) in local {
            claim(&mut names, uf.find(key), format!("{gate_id}.{refnet}"));
        }
    }

    let mut transistors = Vec::new();
    let mut used_roots: HashSet<usize> = HashSet::new();
    for (gi, reference) in references.iter().enumerate() {
        let keys = &instance_keys[gi];
        let gate_id = &netlist.gates[gi].id;
        for t in &reference.transistors {
            let resolve = |net: &str, uf: &mut UnionFind| uf.find(keys[net]);
            let g = resolve(&t.gate.net, &mut uf);
            let s = resolve(&t.src, &mut uf);
            let d = resolve(&t.drn, &mut uf);
            used_roots.extend([g, s, d]);
            transistors.push(Transistor {
                id: format!("{gate_id}.{}", t.id),
                kind: t.kind,
                gate: NetRef { net: names[&g].clone(), inverted: t.gate.inverted },
                src: names[&s].clone(),
                drn: names[&d].clone(),
            });
        }
    }
    for w in netlist.inputs.iter().chain(&netlist.outputs) {
        used_roots.insert(uf.find(wire_key(table.index[w])));
    }
    // wires that end up dangling (garbage aliases of internal nets) still
    // deserve nets so traces can show them
    for wi in 0..netlist.wires.len() {
        if !matches!(table.sources[wi], WireSource::Constant(_)) {
            used_roots.insert(uf.find(wire_key(wi)));
        }
    }

    let mut rails = Vec::new();
    for (rail, value) in [(VDD, true), (GND, false)] {
        let root = uf.find(rail);
        if used_roots.contains(&root) {
            rails.push((names[&root].clone(), value));
        }
    }

    let mut nets: Vec<String> = used_roots
        .iter()
        .map(|root| names[root].clone())
        .chain(rails.iter().map(|(n, _)| n.clone()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    nets.sort();

    let inputs: Vec<String> = netlist
        .inputs
        .iter()
        .map(|w| names[&uf.find(wire_key(table.index[w]))].clone())
        .collect();
    let complements: Vec<(String, String)> = complement_pairs
        .iter()
        .map(|(comp_key, wi)| {
            (
                names[&uf.find(*comp_key)].clone(),
                names[&uf.find(wire_key(*wi))].clone(),
            )
        })
        .collect();
    let outputs: Vec<String> = netlist
        .outputs
        .iter()
        .map(|w| names[&uf.find(wire_key(table.index[w]))].clone())
        .collect();
    let wire_nets: BTreeMap<String, String> = netlist
        .wires
        .iter()
        .enumerate()
        .map(|(wi, w)| (w.clone(), names[&uf.find(wire_key(wi))].clone()))
        .collect();
    let state_nets: Vec<String> = netlist
        .state_wires
        .iter()
        .map(|w| wire_nets[w].clone())
        .collect();

    Ok(Elaborated {
        netlist: SwitchNetlist {
            name: netlist.name.clone(),
            nets,
            rails,
            inputs,
            complements,
            outputs,
            transistors,
        },
        wire_nets,
        state_nets,
    })
}
