//! File formats around simulation: vector CSV, trace CSV, VCD and DOT.

use std::io::Write;

use thiserror::Error;

use crate::cost::garbage_wires;
use crate::netlist::Netlist;
use crate::trace::{Logic, Trace, VectorSet};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("vector file: {0}")]
    Vectors(String),
    #[error(transparent)]
    Write(#[from] std::io::Error),
}

/// Parse a vector CSV: a header row of input wire ids, then one row of
/// 0/1 values per step. Blank lines and `#` comments are skipped.
pub fn read_vectors(text: &str) -> Result<VectorSet, IoError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| IoError::Vectors("missing header row".into()))?;
    let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if columns.iter().any(String::is_empty) {
        return Err(IoError::Vectors("empty column name in header".into()));
    }
    let mut vectors = VectorSet::new(columns);
    for (i, line) in lines.enumerate() {
        let row: Vec<bool> = line
            .split(',')
            .map(|cell| match cell.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(IoError::Vectors(format!(
                    "row {}: expected 0 or 1, got `{other}`",
                    i + 1
                ))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != vectors.columns.len() {
            return Err(IoError::Vectors(format!(
                "row {}: {} values for {} columns",
                i + 1,
                row.len(),
                vectors.columns.len()
            )));
        }
        vectors.push(row);
    }
    Ok(vectors)
}

pub fn write_vectors(vectors: &VectorSet) -> String {
    let mut out = vectors.columns.join(",");
    out.push('\n');
    for row in &vectors.rows {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// An empty stimulus template for a circuit: header of its primary inputs
/// plus a single all-zero row to edit.
pub fn vector_template(netlist: &Netlist) -> String {
    let mut vectors = VectorSet::new(netlist.inputs.clone());
    vectors.push(vec![false; netlist.inputs.len()]);
    write_vectors(&vectors)
}

/// CSV of selected trace columns (typically the primary outputs), one row
/// per step.
pub fn trace_csv(trace: &Trace, columns: &[String]) -> String {
    let mut out = columns.join(",");
    out.push('\n');
    for step in 0..trace.len() {
        let cells: Vec<String> = trace
            .select(step, columns)
            .iter()
            .map(Logic::to_string)
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Dump a trace as a value-change dump, one timestep per trace step, every
/// column as a 1-bit wire.
pub fn write_vcd<W: Write>(trace: &Trace, scope: &str, sink: W) -> Result<(), IoError> {
    let mut writer = vcd::Writer::new(sink);
    writer.timescale(1, vcd::TimescaleUnit::NS)?;
    writer.add_module(scope)?;
    let ids: Vec<vcd::IdCode> = trace
        .columns
        .iter()
        .map(|name| writer.add_wire(1, name))
        .collect::<Result<_, _>>()?;
    writer.upscope()?;
    writer.enddefinitions()?;

    let as_value = |l: Logic| match l {
        Logic::Zero => vcd::Value::V0,
        Logic::One => vcd::Value::V1,
        Logic::X => vcd::Value::X,
    };

    writer.begin(vcd::SimulationCommand::Dumpvars)?;
    for &id in &ids {
        writer.change_scalar(id, vcd::Value::X)?;
    }
    writer.end()?;

    let mut last: Vec<Option<Logic>> = vec![None; trace.columns.len()];
    for (t, step) in trace.steps.iter().enumerate() {
        writer.timestamp(t as u64)?;
        for (i, &v) in step.iter().enumerate() {
            if last[i] != Some(v) {
                writer.change_scalar(ids[i], as_value(v))?;
                last[i] = Some(v);
            }
        }
    }
    writer.timestamp(trace.len() as u64)?;
    Ok(())
}

/// GraphViz export: one box per gate labeled `id:kind`, one edge per wire,
/// garbage wires dashed into a point sink.
pub fn write_dot(netlist: &Netlist) -> Result<String, crate::cost::AnalysisError> {
    let garbage = garbage_wires(netlist)?;
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", netlist.name));
    out.push_str("  rankdir=LR;\n");
    for (i, w) in netlist.inputs.iter().enumerate() {
        out.push_str(&format!("  \"in_{w}\" [shape=plaintext, label=\"{w} (in {i})\"];\n"));
    }
    for c in &netlist.constants {
        out.push_str(&format!(
            "  \"const_{}\" [shape=plaintext, label=\"{}\"];\n",
            c.wire, c.value
        ));
    }
    for (i, w) in netlist.outputs.iter().enumerate() {
        out.push_str(&format!("  \"out_{w}\" [shape=plaintext, label=\"{w} (out {i})\"];\n"));
    }
    for g in &netlist.gates {
        out.push_str(&format!("  \"{}\" [shape=box, label=\"{}:{}\"];\n", g.id, g.id, g.kind));
    }
    for w in &garbage {
        out.push_str(&format!("  \"garbage_{w}\" [shape=point];\n"));
    }

    // resolve each wire's endpoints
    let source_of = |w: &String| -> String {
        if netlist.inputs.contains(w) {
            return format!("\"in_{w}\"");
        }
        if netlist.constants.iter().any(|c| &c.wire == w) {
            return format!("\"const_{w}\"");
        }
        for g in &netlist.gates {
            if g.outs.contains(w) {
                return format!("\"{}\"", g.id);
            }
        }
        format!("\"in_{w}\"")
    };
    let sink_of = |w: &String| -> String {
        for g in &netlist.gates {
            if g.ins.contains(w) {
                return format!("\"{}\"", g.id);
            }
        }
        if netlist.outputs.contains(w) {
            return format!("\"out_{w}\"");
        }
        format!("\"garbage_{w}\"")
    };

    for w in &netlist.wires {
        let style = if garbage.contains(w) { ", style=dashed" } else { "" };
        out.push_str(&format!(
            "  {} -> {} [label=\"{w}\"{style}];\n",
            source_of(w),
            sink_of(w)
        ));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simfunc::run;
    use crate::synth::{build_decoder, build_dff};

    #[test]
    fn vector_csv_round_trip() {
        let mut v = VectorSet::new(vec!["E".into(), "D".into()]);
        v.push(vec![true, false]);
        v.push(vec![false, false]);
        let text = write_vectors(&v);
        assert_eq!(text, "E,D\n1,0\n0,0\n");
        assert_eq!(read_vectors(&text).unwrap(), v);
    }

    #[test]
    fn vector_csv_rejects_junk() {
        assert!(read_vectors("").is_err());
        assert!(read_vectors("a,b\n1\n").is_err());
        assert!(read_vectors("a,b\n1,2\n").is_err());
    }

    #[test]
    fn vectors_allow_comments_and_blanks() {
        let v = read_vectors("# stimulus\n\na,b\n0,1\n\n# done\n").unwrap();
        assert_eq!(v.columns, vec!["a", "b"]);
        assert_eq!(v.rows, vec![vec![false, true]]);
    }

    #[test]
    fn template_has_one_zero_row() {
        let dff = build_dff(false);
        assert_eq!(vector_template(&dff), "E,D\n0,0\n");
    }

    #[test]
    fn vcd_smoke() {
        let dff = build_dff(false);
        let mut vectors = VectorSet::new(dff.inputs.clone());
        vectors.push(vec![true, true]);
        vectors.push(vec![false, false]);
        let trace = run(&dff, &vectors, false).unwrap();
        let mut buffer = Vec::new();
        write_vcd(&trace, &dff.name, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        assert!(text.contains("$timescale"));
        assert!(text.contains("$var wire 1"));
        assert!(text.contains("#0"));
        assert!(text.contains("#1"));
    }

    #[test]
    fn dot_export_decoder2() {
        let dot = write_dot(&build_decoder(2).unwrap()).unwrap();
        assert_eq!(dot.matches("shape=box").count(), 1);
        assert_eq!(dot.matches(" -> ").count(), 8);
        assert!(dot.contains("hl:HL"));
        assert!(!dot.contains("style=dashed"));
        let dot3 = write_dot(&build_decoder(3).unwrap()).unwrap();
        assert_eq!(dot3.matches("style=dashed").count(), 1);
    }

    #[test]
    fn trace_csv_selects_outputs() {
        let dff = build_dff(false);
        let mut vectors = VectorSet::new(dff.inputs.clone());
        vectors.push(vec![true, true]);
        let trace = run(&dff, &vectors, false).unwrap();
        assert_eq!(trace_csv(&trace, &dff.outputs), "Q\n1\n");
    }
}
