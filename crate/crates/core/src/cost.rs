//! Mechanical cost accounting over validated netlists.
//!
//! All six metrics are structural counts: gates, quantum cost, transistors,
//! garbage outputs (gate outputs consumed by nothing), constant inputs, and
//! delay as gate-weighted logical depth. State wires cut delay paths, so a
//! latch feedback arc is a path endpoint rather than an infinite loop.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::CostModel;
use crate::netlist::{Netlist, Violation, WireSink, WireSource, WireTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub gate_count: usize,
    pub quantum_cost: usize,
    pub transistor_count: usize,
    pub garbage_outputs: usize,
    pub constant_inputs: usize,
    /// Logical depth in delta units.
    pub delay: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("invalid netlist: {0}")]
    Invalid(Violation),
}

fn table(netlist: &Netlist) -> Result<WireTable, AnalysisError> {
    netlist
        .build_table()
        .map_err(|mut v| AnalysisError::Invalid(v.remove(0)))
}

/// Full cost report under the default cost table.
pub fn analyze(netlist: &Netlist) -> Result<CostReport, AnalysisError> {
    analyze_with(netlist, &CostModel::default())
}

/// Full cost report under a caller-supplied cost table.
pub fn analyze_with(netlist: &Netlist, model: &CostModel) -> Result<CostReport, AnalysisError> {
    let table = table(netlist)?;
    let mut quantum_cost = 0;
    let mut transistor_count = 0;
    for g in &netlist.gates {
        let spec = model.spec(g.kind);
        quantum_cost += spec.quantum_cost;
        transistor_count += spec.transistor_count;
    }
    Ok(CostReport {
        gate_count: netlist.gates.len(),
        quantum_cost,
        transistor_count,
        garbage_outputs: garbage_indices(netlist, &table).len(),
        constant_inputs: netlist.constants.len(),
        delay: depth(netlist, &table, model),
    })
}

/// Gate-weighted logical depth: the heaviest chain of gates from any primary
/// input to a primary output or a state wire.
pub fn longest_path(netlist: &Netlist) -> Result<usize, AnalysisError> {
    let table = table(netlist)?;
    Ok(depth(netlist, &table, &CostModel::default()))
}

/// Gate-output wires consumed by nothing and not promoted to primary
/// outputs, in declaration order.
pub fn garbage_wires(netlist: &Netlist) -> Result<Vec<String>, AnalysisError> {
    let table = table(netlist)?;
    Ok(garbage_indices(netlist, &table)
        .into_iter()
        .map(|i| netlist.wires[i].clone())
        .collect())
}

fn garbage_indices(netlist: &Netlist, table: &WireTable) -> Vec<usize> {
    (0..netlist.wires.len())
        .filter(|&i| {
            matches!(table.sources[i], WireSource::Gate { .. }) && table.sinks[i].is_none()
        })
        .collect()
}

fn depth(netlist: &Netlist, table: &WireTable, model: &CostModel) -> usize {
    // finish[g] = completion depth of gate g over the state-cut DAG
    let mut finish = vec![0usize; netlist.gates.len()];
    for &g in &table.topo {
        let mut start = 0;
        for w in &netlist.gates[g].ins {
            let wi = table.index[w];
            if table.state.contains(&wi) {
                continue;
            }
            if let WireSource::Gate { gate, .. } = table.sources[wi] {
                start = start.max(finish[gate]);
            }
        }
        finish[g] = start + model.spec(netlist.gates[g].kind).delay;
    }

    // paths must end at a primary output or a state wire
    let mut best = 0;
    for (wi, src) in table.sources.iter().enumerate() {
        if let WireSource::Gate { gate, .. } = src {
            let terminal = matches!(table.sinks[wi], Some(WireSink::Output(_)))
                || table.state.contains(&wi);
            if terminal {
                best = best.max(finish[*gate]);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateKind;
    use crate::netlist::{ConstBinding, GateInstance};
    use crate::synth::{build_dff, build_rom, single_gate, RomParams};

    use proptest::prelude::*;

    #[test]
    fn dff_report_matches_published_row() {
        let report = analyze(&build_dff(false)).unwrap();
        assert_eq!(report.gate_count, 1);
        assert_eq!(report.garbage_outputs, 2);
        assert_eq!(report.quantum_cost, 5);
        assert_eq!(report.transistor_count, 9);
        assert_eq!(report.delay, 5);
    }

    #[test]
    fn dff_with_complement_report() {
        let report = analyze(&build_dff(true)).unwrap();
        assert_eq!(report.gate_count, 2);
        assert_eq!(report.quantum_cost, 6);
        assert_eq!(report.transistor_count, 12);
        assert_eq!(report.delay, 6);
        // mechanical count; the published table claims 1
        assert_eq!(report.garbage_outputs, 2);
    }

    #[test]
    fn rom_4x2_report() {
        let rom = build_rom(RomParams { n: 4, m: 2, k: 2 }).unwrap();
        let report = analyze(&rom).unwrap();
        assert_eq!(report.gate_count, 82);
        assert_eq!(report.transistor_count, 522);
        assert_eq!(report.garbage_outputs, 88);
    }

    #[test]
    fn passthrough_netlist_is_free() {
        let n = Netlist {
            name: "wire".into(),
            wires: vec!["x".into()],
            inputs: vec!["x".into()],
            outputs: vec!["x".into()],
            constants: vec![],
            gates: vec![],
            state_wires: vec![],
            meta: serde_json::json!({}),
        };
        let report = analyze(&n).unwrap();
        assert_eq!(
            report,
            CostReport {
                gate_count: 0,
                quantum_cost: 0,
                transistor_count: 0,
                garbage_outputs: 0,
                constant_inputs: 0,
                delay: 0,
            }
        );
    }

    #[test]
    fn delay_examples() {
        assert_eq!(longest_path(&single_gate(GateKind::Np)).unwrap(), 5);
        assert_eq!(longest_path(&build_dff(true)).unwrap(), 6);
    }

    #[test]
    fn delay_adds_over_serial_composition() {
        // chain g Feynman gates end to end: depth grows by 1 per gate
        fn chain(len: usize) -> Netlist {
            let mut wires = vec!["x0".into(), "k".into()];
            let mut gates = Vec::new();
            let mut constants = vec![ConstBinding { wire: "k".into(), value: 0 }];
            let mut carry = "x0".to_string();
            for i in 0..len {
                let keep = format!("g{i}.p");
                let next = format!("x{}", i + 1);
                let konst = format!("g{i}.k");
                if i > 0 {
                    constants.push(ConstBinding { wire: konst.clone(), value: 0 });
                }
                let second_in = if i == 0 { "k".to_string() } else { konst.clone() };
                gates.push(GateInstance {
                    id: format!("g{i}"),
                    kind: GateKind::Feynman,
                    ins: vec![carry.clone(), second_in.clone()],
                    outs: vec![next.clone(), keep.clone()],
                });
                if i > 0 {
                    wires.push(second_in);
                }
                wires.push(next.clone());
                wires.push(keep);
                carry = next;
            }
            Netlist {
                name: format!("chain{len}"),
                wires,
                inputs: vec!["x0".into()],
                outputs: vec![carry],
                constants,
                gates,
                state_wires: vec![],
                meta: serde_json::json!({}),
            }
        }
        let a = longest_path(&chain(3)).unwrap();
        let b = longest_path(&chain(5)).unwrap();
        let composed = longest_path(&chain(8)).unwrap();
        assert_eq!(a, 3);
        assert_eq!(b, 5);
        assert_eq!(composed, a + b);
    }

    #[test]
    fn garbage_wire_lists() {
        assert!(garbage_wires(&crate::synth::build_decoder(2).unwrap())
            .unwrap()
            .is_empty());
        let mut dff_garbage = garbage_wires(&build_dff(false)).unwrap();
        dff_garbage.sort();
        assert_eq!(dff_garbage, vec!["np.p".to_string(), "np.q".to_string()]);
        assert_eq!(
            garbage_wires(&crate::synth::build_decoder(3).unwrap()).unwrap().len(),
            1
        );
    }

    #[test]
    fn garbage_plus_outputs_covers_unconsumed_gate_outputs() {
        for netlist in [
            crate::synth::build_decoder(4).unwrap(),
            build_dff(true),
            build_rom(RomParams { n: 4, m: 1, k: 2 }).unwrap(),
        ] {
            let table = netlist.build_table().unwrap();
            let report = analyze(&netlist).unwrap();
            let unconsumed = (0..netlist.wires.len())
                .filter(|&i| {
                    matches!(table.sources[i], WireSource::Gate { .. })
                        && !matches!(table.sinks[i], Some(WireSink::Gate { .. }))
                })
                .count();
            let gate_driven_outputs = netlist
                .outputs
                .iter()
                .filter(|w| matches!(table.sources[table.index[*w]], WireSource::Gate { .. }))
                .count();
            assert_eq!(report.garbage_outputs + gate_driven_outputs, unconsumed);
        }
    }

    #[test]
    fn analysis_error_names_first_violation() {
        let mut n = build_dff(false);
        n.state_wires.clear();
        match analyze(&n) {
            Err(AnalysisError::Invalid(Violation::Cycle(_))) => {}
            other => panic!("expected cycle violation, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn analyze_is_order_independent(seed in 0u64..64) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let base = build_rom(RomParams { n: 4, m: 1, k: 2 }).unwrap();
            let reference = analyze(&base).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut shuffled = base.clone();
            shuffled.gates.shuffle(&mut rng);
            shuffled.wires.shuffle(&mut rng);
            shuffled.constants.shuffle(&mut rng);
            prop_assert_eq!(analyze(&shuffled).unwrap(), reference);
        }

        #[test]
        fn quantum_cost_is_additive(n in 2u32..=5) {
            let netlist = crate::synth::build_decoder(n).unwrap();
            let report = analyze(&netlist).unwrap();
            let by_hand: usize = netlist
                .gates
                .iter()
                .map(|g| crate::gates::metadata(g.kind).quantum_cost)
                .sum();
            prop_assert_eq!(report.quantum_cost, by_hand);
        }
    }
}
