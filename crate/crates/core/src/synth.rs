//! Parameterized circuit generators and closed-form count oracles.
//!
//! Three families are generated:
//!
//! * `build_decoder(n)`: an n-to-2^n one-hot decoder, one HL gate decoding
//!   the two low address bits, then one rank of Fredkin gates per further
//!   bit, the new bit threaded through the rank on the Fredkin passthrough.
//! * `build_dff(..)`: a level-sensitive D latch built from a single NP gate
//!   (enable on A, data on B, the R output fed back to C), optionally with a
//!   Feynman stage producing the complement output.
//! * `build_rom(params)`: a 2^n x m ROM with row/column decoders, a Toffoli
//!   grid computing word selects, m latch cells per word, and a Fredkin
//!   output buffer that threads each selected word onto shared output buses.
//!
//! The expected gate, garbage and transistor totals of the ROM family have
//! closed forms (`thm2_gates`, `thm3_garbage`, `thm4_transistors`);
//! `crosscheck` builds a ROM and verifies the mechanical counts against the
//! formulas with exact integer equality.

use serde_json::json;
use thiserror::Error;

use crate::cost::{analyze, AnalysisError, CostReport};
use crate::gates::{eval_slice, GateKind};
use crate::netlist::{ConstBinding, GateInstance, Netlist};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RomParams {
    /// Address bits; the ROM stores 2^n words.
    pub n: u32,
    /// Word width in bits.
    pub m: u32,
    /// Row-decoder bits. `k = n` drops the column decoder and Toffoli grid.
    pub k: u32,
}

impl RomParams {
    pub fn words(&self) -> usize {
        1 << self.n
    }

    /// True when the count formulas apply (both decoders at least 2 bits).
    pub fn in_theorem_range(&self) -> bool {
        self.k >= 2 && self.n >= self.k + 2
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("decoder size must be in 2..=8, got {0}")]
    DecoderSize(u32),
    #[error("invalid ROM parameters (n={n}, m={m}, k={k}): {reason}")]
    RomParams { n: u32, m: u32, k: u32, reason: &'static str },
    #[error("formulas require k >= 2 and n - k >= 2, got n={n}, k={k}")]
    TheoremRange { n: u32, k: u32 },
    #[error("argument out of range: {0}")]
    Range(&'static str),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

// Accumulates a netlist while wiring gates; ids double as wire names.
#[derive(Default)]
struct Build {
    wires: Vec<String>,
    constants: Vec<ConstBinding>,
    gates: Vec<GateInstance>,
    state_wires: Vec<String>,
}

impl Build {
    fn wire(&mut self, id: impl Into<String>) -> String {
        let id = id.into();
        self.wires.push(id.clone());
        id
    }

    fn constant(&mut self, id: impl Into<String>, value: bool) -> String {
        let id = self.wire(id);
        self.constants.push(ConstBinding { wire: id.clone(), value: u8::from(value) });
        id
    }

    fn state(&mut self, id: impl Into<String>) -> String {
        let id = self.wire(id);
        self.state_wires.push(id.clone());
        id
    }

    fn gate(&mut self, id: impl Into<String>, kind: GateKind, ins: Vec<String>, outs: Vec<String>) {
        self.gates.push(GateInstance { id: id.into(), kind, ins, outs });
    }

    fn finish(
        self,
        name: impl Into<String>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        meta: serde_json::Value,
    ) -> Netlist {
        let netlist = Netlist {
            name: name.into(),
            wires: self.wires,
            inputs,
            outputs,
            constants: self.constants,
            gates: self.gates,
            state_wires: self.state_wires,
            meta,
        };
        debug_assert!(netlist.validate().is_empty(), "generator produced {:?}", netlist.validate());
        netlist
    }
}

// Address-to-port mapping of the HL base decoder, checked on every build:
// with C=0, D=1 the outputs are P=XY', Q=X'Y, R=XY, S=X'Y', i.e. the one-hot
// lines for addresses 2, 1, 3, 0.
const HL_PORT_FOR_ADDRESS: [usize; 4] = [3, 1, 0, 2];

fn assert_hl_base_mapping() {
    for (addr, &hot_port) in HL_PORT_FOR_ADDRESS.iter().enumerate() {
        let x = addr >> 1 & 1 == 1;
        let y = addr & 1 == 1;
        let out = eval_slice(GateKind::Hl, &[x, y, false, true]);
        for (port, &v) in out.iter().enumerate() {
            assert_eq!(
                v,
                port == hot_port,
                "HL base decoding is not one-hot at address {addr}"
            );
        }
    }
}

/// Emit a decoder over `bits` (most significant first) into `build`.
/// Returns the 2^n one-hot lines in address order; the line for address `i`
/// is named by `line_name(i)` on the final rank.
fn decoder_into(
    build: &mut Build,
    prefix: &str,
    bits: &[String],
    line_name: &dyn Fn(usize) -> String,
) -> Vec<String> {
    let n = bits.len();
    assert!(n >= 2);
    assert_hl_base_mapping();

    let stage_name = |build: &mut Build, level: usize, i: usize, final_level: bool| {
        if final_level {
            build.wire(line_name(i))
        } else {
            build.wire(format!("{prefix}s{level}_{i}"))
        }
    };

    // base: HL on the two least significant bits
    let hl = format!("{prefix}hl");
    let c0 = build.constant(format!("{hl}.c"), false);
    let c1 = build.constant(format!("{hl}.d"), true);
    let mut names = [const { String::new() }; 4];
    for addr in 0..4 {
        names[HL_PORT_FOR_ADDRESS[addr]] = stage_name(build, 2, addr, n == 2);
    }
    build.gate(
        hl,
        GateKind::Hl,
        vec![bits[n - 2].clone(), bits[n - 1].clone(), c0, c1],
        names.to_vec(),
    );
    let mut lines: Vec<String> = (0..4)
        .map(|addr| names[HL_PORT_FOR_ADDRESS[addr]].clone())
        .collect();

    // one Fredkin rank per further bit, new bit = next higher significance
    for level in 3..=n {
        let half = 1 << (level - 1);
        let mut thread = bits[n - level].clone();
        let mut next = vec![String::new(); half * 2];
        for (i, line) in lines.into_iter().enumerate() {
            let id = format!("{prefix}f{level}_{i}");
            let c = build.constant(format!("{id}.c"), false);
            let pass = build.wire(format!("{id}.p"));
            let low = stage_name(build, level, i, level == n);
            let high = stage_name(build, level, half + i, level == n);
            build.gate(
                id,
                GateKind::Fredkin,
                vec![thread.clone(), line, c],
                vec![pass.clone(), low.clone(), high.clone()],
            );
            next[i] = low;
            next[half + i] = high;
            thread = pass;
        }
        lines = next;
    }
    lines
}

/// n-to-2^n one-hot reversible decoder, 2 <= n <= 8. Input `i1` is the most
/// significant address bit; output `j` goes high exactly for address `j`.
pub fn build_decoder(n: u32) -> Result<Netlist, SynthError> {
    if !(2..=8).contains(&n) {
        return Err(SynthError::DecoderSize(n));
    }
    let n = n as usize;
    let mut build = Build::default();
    let bits: Vec<String> = (1..=n).map(|i| build.wire(format!("i{i}"))).collect();
    let lines = decoder_into(&mut build, "", &bits, &|i| format!("d{i}"));
    let meta = json!({
        "params": { "n": n },
        "address_order": "i1 is the most significant address bit",
        "paper_claims": {
            "gates": (1usize << n) - 3,
            "transistors": 4 * (1usize << n) - 3,
            "garbage": n - 2,
        },
        "errata": [],
    });
    Ok(build.finish(format!("decoder{n}"), bits, lines, meta))
}

/// Level-sensitive D latch around one NP gate: enable E on A, data D on B,
/// the R output fed back to C, and a constant 0 on the D port so the Q
/// output (port S) equals the latched value. With `with_complement` a
/// Feynman stage splits Q into Q and Q'.
pub fn build_dff(with_complement: bool) -> Netlist {
    let mut build = Build::default();
    let e = build.wire("E");
    let d = build.wire("D");
    let fb = build.state("np.fb");
    let dc = build.constant("np.dc", false);
    let p = build.wire("np.p");
    let q_garbage = build.wire("np.q");

    let (outputs, meta);
    if with_complement {
        let s = build.wire("np.s");
        build.gate("np", GateKind::Np, vec![e.clone(), d.clone(), fb.clone(), dc], vec![p, q_garbage, fb, s.clone()]);
        let cb = build.constant("fey.cb", true);
        let q = build.wire("Q");
        let qbar = build.wire("Qbar");
        build.gate("fey", GateKind::Feynman, vec![s, cb], vec![q.clone(), qbar.clone()]);
        outputs = vec![q, qbar];
        meta = json!({
            "params": { "with_complement": true },
            "paper_claims": {
                "gates": 2, "garbage": 1, "quantum_cost": 6, "transistors": 12, "delay": 6,
            },
            "errata": [
                "published table reports 1 garbage output; both unused NP outputs \
                 are structurally garbage, so the mechanical count is 2",
            ],
        });
    } else {
        let q = build.wire("Q");
        build.gate("np", GateKind::Np, vec![e.clone(), d.clone(), fb.clone(), dc], vec![p, q_garbage, fb, q.clone()]);
        outputs = vec![q];
        meta = json!({
            "params": { "with_complement": false },
            "paper_claims": {
                "gates": 1, "garbage": 2, "quantum_cost": 5, "transistors": 9, "delay": 5,
            },
            "errata": [],
        });
    }
    build.finish(if with_complement { "dff_qqbar" } else { "dff_q" }, vec![e, d], outputs, meta)
}

/// 2^n x m ROM per the construction algorithm. Address inputs are
/// `I1..In` (`I1` most significant, the first k bits select the row), data
/// inputs `R{w}D{j}` for word `w` in 1..=2^n and bit `j` in 0..m. Word `w`
/// stores the data for address `w - 1`; outputs are `Q0..Q{m-1}`.
pub fn build_rom(params: RomParams) -> Result<Netlist, SynthError> {
    let RomParams { n, m, k } = params;
    let bad = |reason| Err(SynthError::RomParams { n, m, k, reason });
    if n < 2 {
        return bad("need at least 2 address bits");
    }
    if n > 6 {
        return bad("desk-scale limit is n <= 6");
    }
    if m < 1 {
        return bad("word width must be at least 1");
    }
    if k < 2 || k > n {
        return bad("row split must satisfy 2 <= k <= n");
    }
    if k == n - 1 {
        return bad("column decoder needs at least 2 bits; use k = n for a single decoder");
    }

    let words = 1usize << n;
    let m = m as usize;
    let mut build = Build::default();

    let addr: Vec<String> = (1..=n).map(|i| build.wire(format!("I{i}"))).collect();
    let data: Vec<Vec<String>> = (1..=words)
        .map(|w| (0..m).map(|j| build.wire(format!("R{w}D{j}"))).collect())
        .collect();

    // word selects, in word order
    let word_select: Vec<String> = if k == n {
        decoder_into(&mut build, "rd_", &addr, &|i| format!("rd_d{i}"))
    } else {
        let rows = 1usize << k;
        let cols = 1usize << (n - k);
        let row_lines = decoder_into(&mut build, "rd_", &addr[..k as usize], &|i| format!("rd_d{i}"));
        let col_lines = decoder_into(&mut build, "cd_", &addr[k as usize..], &|i| format!("cd_d{i}"));

        // Toffoli grid: row select threads along each row on O1, column
        // select down each column on O2, O3 is the word select.
        let mut selects = vec![String::new(); words];
        for r in 1..=rows {
            for c in 1..=cols {
                let id = format!("t{r}_{c}");
                let i1 = if c == 1 { row_lines[r - 1].clone() } else { format!("t{r}_{}.o1", c - 1) };
                let i2 = if r == 1 { col_lines[c - 1].clone() } else { format!("t{}_{c}.o2", r - 1) };
                let i3 = build.constant(format!("{id}.c"), false);
                let o1 = build.wire(format!("{id}.o1"));
                let o2 = build.wire(format!("{id}.o2"));
                let o3 = build.wire(format!("{id}.o3"));
                build.gate(id, GateKind::Toffoli, vec![i1, i2, i3], vec![o1, o2, o3.clone()]);
                selects[(r - 1) * cols + (c - 1)] = o3;
            }
        }
        selects
    };

    // per word: m latch cells, enable threaded through the NP passthrough
    for w in 1..=words {
        let mut enable = word_select[w - 1].clone();
        for (j, data_wire) in data[w - 1].iter().enumerate() {
            let id = format!("w{w}_ff{j}");
            let fb = build.state(format!("{id}.fb"));
            let dc = build.constant(format!("{id}.dc"), false);
            let p = build.wire(format!("{id}.p"));
            let q = build.wire(format!("{id}.q"));
            let s = build.wire(format!("{id}.s"));
            build.gate(
                id,
                GateKind::Np,
                vec![enable.clone(), data_wire.clone(), fb.clone(), dc],
                vec![p.clone(), q, fb, s],
            );
            enable = p;
        }

        // output buffer: the word select continues through this word's
        // Fredkins; each Fredkin splices the latched bit onto bus j
        for j in 0..m {
            let id = format!("w{w}_ob{j}");
            let bus_in = if w == 1 {
                build.constant(format!("ob{j}.head"), false)
            } else {
                format!("w{}_ob{j}.q", w - 1)
            };
            let pass = build.wire(format!("{id}.p"));
            let bus_out = if w == words {
                build.wire(format!("Q{j}"))
            } else {
                build.wire(format!("{id}.q"))
            };
            let spill = build.wire(format!("{id}.r"));
            build.gate(
                id,
                GateKind::Fredkin,
                vec![enable.clone(), bus_in, format!("w{w}_ff{j}.s")],
                vec![pass.clone(), bus_out, spill],
            );
            enable = pass;
        }
    }

    let outputs: Vec<String> = (0..m).map(|j| format!("Q{j}")).collect();
    let mut inputs = addr;
    inputs.extend(data.into_iter().flatten());

    let mut meta = json!({
        "params": { "n": n, "m": m, "k": k },
        "address_order":
            "I1 is the most significant address bit; word w stores address w-1",
        "errata": [],
    });
    if params.in_theorem_range() {
        meta["paper_claims"] = json!({
            "gates": thm2_gates(n, m as u32, k)?,
            "garbage": thm3_garbage(n, m as u32, k)?,
            "transistors": thm4_transistors(n, m as u32, k)?,
        });
        if (n, m, k) == (4, 2, 2) {
            meta["errata"] = json!([
                "published conclusions state 18 garbage outputs for the 16x2 ROM; \
                 the garbage formula and the mechanical count both give 88",
            ]);
        }
    } else {
        meta["note"] =
            json!("single-decoder configuration; count formulas assume both decoders exist");
    }

    Ok(build.finish(format!("rom_{words}x{m}_k{k}"), inputs, outputs, meta))
}

/// One gate as a complete netlist: inputs `a..`, outputs `p..`.
pub fn single_gate(kind: GateKind) -> Netlist {
    let w = kind.width();
    let mut build = Build::default();
    let ins: Vec<String> = ["a", "b", "c", "d"][..w].iter().map(|s| build.wire(*s)).collect();
    let outs: Vec<String> = ["p", "q", "r", "s"][..w].iter().map(|s| build.wire(*s)).collect();
    build.gate("g", kind, ins.clone(), outs.clone());
    build.finish(
        format!("{}_gate", kind.name().to_lowercase()),
        ins,
        outs,
        json!({ "params": { "kind": kind.name() } }),
    )
}

fn pow2(e: u32) -> Result<usize, SynthError> {
    if e >= usize::BITS - 1 {
        return Err(SynthError::Range("power of two overflows"));
    }
    Ok(1usize << e)
}

/// Transistor total of an n-to-2^n decoder: 4 * 2^n - 3.
pub fn thm1_transistors(n: u32) -> Result<usize, SynthError> {
    if n < 2 {
        return Err(SynthError::Range("decoder formula needs n >= 2"));
    }
    Ok(4 * pow2(n)? - 3)
}

fn theorem_args(n: u32, m: u32, k: u32) -> Result<(), SynthError> {
    if m < 1 {
        return Err(SynthError::Range("word width must be at least 1"));
    }
    if k < 2 || n < k + 2 {
        return Err(SynthError::TheoremRange { n, k });
    }
    Ok(())
}

/// Gate total of a 2^n x m ROM: 2^k + 2^(n-k) + 2^n(2m + 1) - 6.
pub fn thm2_gates(n: u32, m: u32, k: u32) -> Result<usize, SynthError> {
    theorem_args(n, m, k)?;
    Ok(pow2(k)? + pow2(n - k)? + pow2(n)? * (2 * m as usize + 1) - 6)
}

/// Garbage-output total of a 2^n x m ROM: n + 2^k + 2^(n-k) + 2^n(2m + 1) - 4.
pub fn thm3_garbage(n: u32, m: u32, k: u32) -> Result<usize, SynthError> {
    theorem_args(n, m, k)?;
    Ok(n as usize + pow2(k)? + pow2(n - k)? + pow2(n)? * (2 * m as usize + 1) - 4)
}

/// Transistor total of a 2^n x m ROM: 4*2^k + 4*2^(n-k) + 2^n(13m + 5) - 6.
pub fn thm4_transistors(n: u32, m: u32, k: u32) -> Result<usize, SynthError> {
    theorem_args(n, m, k)?;
    Ok(4 * pow2(k)? + 4 * pow2(n - k)? + pow2(n)? * (13 * m as usize + 5) - 6)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremPrediction {
    pub gates: usize,
    pub garbage: usize,
    pub transistors: usize,
}

/// Formula predictions next to measured counts, with exact-match flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremReport {
    pub predicted: TheoremPrediction,
    pub measured: CostReport,
    pub gates_match: bool,
    pub garbage_match: bool,
    pub transistors_match: bool,
}

impl TheoremReport {
    pub fn all_match(&self) -> bool {
        self.gates_match && self.garbage_match && self.transistors_match
    }
}

/// Build the ROM for `params`, analyze it, and compare against the formulas.
pub fn crosscheck(params: RomParams) -> Result<TheoremReport, SynthError> {
    if !params.in_theorem_range() {
        return Err(SynthError::TheoremRange { n: params.n, k: params.k });
    }
    let predicted = TheoremPrediction {
        gates: thm2_gates(params.n, params.m, params.k)?,
        garbage: thm3_garbage(params.n, params.m, params.k)?,
        transistors: thm4_transistors(params.n, params.m, params.k)?,
    };
    let measured = analyze(&build_rom(params)?)?;
    Ok(TheoremReport {
        predicted,
        measured,
        gates_match: predicted.gates == measured.gate_count,
        garbage_match: predicted.garbage == measured.garbage_outputs,
        transistors_match: predicted.transistors == measured.transistor_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{analyze, garbage_wires};
    use crate::simfunc::{run, step, SimState};
    use crate::trace::{Logic, VectorSet};
    use std::collections::BTreeMap;

    #[test]
    fn decoder_2_counts() {
        let dec = build_decoder(2).unwrap();
        let report = analyze(&dec).unwrap();
        assert_eq!(report.gate_count, 1);
        assert_eq!(report.transistor_count, 13);
        assert_eq!(report.garbage_outputs, 0);
    }

    #[test]
    fn decoder_3_counts() {
        let dec = build_decoder(3).unwrap();
        let report = analyze(&dec).unwrap();
        assert_eq!(report.gate_count, 5);
        assert_eq!(report.transistor_count, 29);
        assert_eq!(report.garbage_outputs, 1);
        let hl = dec.gates.iter().filter(|g| g.kind == GateKind::Hl).count();
        let fred = dec.gates.iter().filter(|g| g.kind == GateKind::Fredkin).count();
        assert_eq!((hl, fred), (1, 4));
    }

    #[test]
    fn decoder_counts_follow_closed_forms() {
        for n in 2..=6u32 {
            let dec = build_decoder(n).unwrap();
            let report = analyze(&dec).unwrap();
            assert_eq!(report.gate_count, (1 << n) - 3, "gates at n={n}");
            assert_eq!(report.transistor_count, thm1_transistors(n).unwrap(), "transistors at n={n}");
            assert_eq!(report.garbage_outputs, n as usize - 2, "garbage at n={n}");
            assert_eq!(garbage_wires(&dec).unwrap().len(), n as usize - 2);
        }
    }

    #[test]
    fn decoder_is_exhaustively_one_hot() {
        for n in 2..=6u32 {
            let dec = build_decoder(n).unwrap();
            let mut vectors = VectorSet::new(dec.inputs.clone());
            for a in 0..1usize << n {
                vectors.push((0..n as usize).map(|i| (a >> (n as usize - 1 - i)) & 1 == 1).collect());
            }
            let trace = run(&dec, &vectors, false).unwrap();
            for a in 0..1usize << n {
                let outs = trace.select(a, &dec.outputs);
                for (i, v) in outs.iter().enumerate() {
                    assert_eq!(*v, Logic::from_bool(i == a), "n={n} address {a} line {i}");
                }
            }
        }
    }

    #[test]
    fn decoder_2_worked_example() {
        let dec = build_decoder(2).unwrap();
        let inputs: BTreeMap<String, bool> =
            [("i1".to_string(), true), ("i2".to_string(), false)].into();
        let s = step(&dec, &SimState::initial(&dec, false), &inputs).unwrap();
        let outs: Vec<bool> = dec.outputs.iter().map(|w| s.values[w]).collect();
        assert_eq!(outs, vec![false, false, true, false]);
    }

    #[test]
    fn decoder_size_limits() {
        assert!(matches!(build_decoder(1), Err(SynthError::DecoderSize(1))));
        assert!(matches!(build_decoder(9), Err(SynthError::DecoderSize(9))));
        assert!(build_decoder(8).is_ok());
    }

    #[test]
    fn hl_base_wiring_brute_force() {
        // HL(X, Y, 0, 1) = (XY', X'Y, XY, X'Y')
        for x in [false, true] {
            for y in [false, true] {
                let out = eval_slice(GateKind::Hl, &[x, y, false, true]);
                assert_eq!(out[0], x && !y);
                assert_eq!(out[1], !x && y);
                assert_eq!(out[2], x && y);
                assert_eq!(out[3], !x && !y);
            }
        }
    }

    #[test]
    fn dff_structure() {
        let plain = build_dff(false);
        assert_eq!(plain.gates.len(), 1);
        assert_eq!(plain.outputs, vec!["Q"]);
        assert_eq!(plain.state_wires, vec!["np.fb"]);
        let full = build_dff(true);
        assert_eq!(full.gates.len(), 2);
        assert_eq!(full.outputs, vec!["Q", "Qbar"]);
        assert_eq!(full.meta["paper_claims"]["garbage"], 1);
        assert!(!full.meta["errata"].as_array().unwrap().is_empty());
    }

    #[test]
    fn dff_complement_output_is_complement() {
        let dff = build_dff(true);
        let mut state = SimState::initial(&dff, false);
        for (e, d) in [(true, true), (false, false), (true, false), (false, true)] {
            let inputs: BTreeMap<String, bool> =
                [("E".to_string(), e), ("D".to_string(), d)].into();
            state = step(&dff, &state, &inputs).unwrap();
            assert_ne!(state.values["Q"], state.values["Qbar"]);
        }
    }

    #[test]
    fn rom_conclusions_counts() {
        let r22 = analyze(&build_rom(RomParams { n: 4, m: 2, k: 2 }).unwrap()).unwrap();
        assert_eq!((r22.gate_count, r22.transistor_count), (82, 522));
        let r42 = analyze(&build_rom(RomParams { n: 4, m: 4, k: 2 }).unwrap()).unwrap();
        assert_eq!(
            (r42.gate_count, r42.transistor_count, r42.garbage_outputs),
            (146, 938, 152)
        );
        let r12 = analyze(&build_rom(RomParams { n: 4, m: 1, k: 2 }).unwrap()).unwrap();
        assert_eq!(
            (r12.gate_count, r12.transistor_count, r12.garbage_outputs),
            (50, 314, 56)
        );
    }

    #[test]
    fn rom_rejects_bad_params() {
        assert!(build_rom(RomParams { n: 4, m: 0, k: 2 }).is_err());
        assert!(build_rom(RomParams { n: 1, m: 1, k: 2 }).is_err());
        assert!(build_rom(RomParams { n: 7, m: 1, k: 2 }).is_err());
        assert!(build_rom(RomParams { n: 4, m: 1, k: 1 }).is_err());
        assert!(build_rom(RomParams { n: 4, m: 1, k: 5 }).is_err());
        // n - k = 1 has no constructible column decoder
        assert!(build_rom(RomParams { n: 4, m: 1, k: 3 }).is_err());
        // degenerate single-decoder form is fine
        assert!(build_rom(RomParams { n: 4, m: 1, k: 4 }).is_ok());
    }

    #[test]
    fn theorem_formulas_worked_examples() {
        assert_eq!(thm1_transistors(2).unwrap(), 13);
        assert_eq!(thm2_gates(4, 2, 2).unwrap(), 82);
        assert_eq!(thm4_transistors(4, 2, 2).unwrap(), 522);
        assert_eq!(thm3_garbage(4, 2, 2).unwrap(), 88);
        assert!(matches!(thm2_gates(4, 2, 3), Err(SynthError::TheoremRange { .. })));
        assert!(matches!(thm3_garbage(3, 2, 2), Err(SynthError::TheoremRange { .. })));
    }

    #[test]
    fn crosscheck_worked_examples() {
        assert!(crosscheck(RomParams { n: 4, m: 2, k: 2 }).unwrap().all_match());
        let r = crosscheck(RomParams { n: 4, m: 4, k: 2 }).unwrap();
        assert!(r.all_match());
        assert_eq!(r.measured.garbage_outputs, 152);
        assert!(crosscheck(RomParams { n: 5, m: 1, k: 2 }).unwrap().all_match());
        assert!(crosscheck(RomParams { n: 5, m: 1, k: 3 }).unwrap().all_match());
    }

    #[test]
    fn word_select_exclusivity() {
        let rom = build_rom(RomParams { n: 4, m: 1, k: 2 }).unwrap();
        let selects: Vec<String> = rom
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Toffoli)
            .map(|g| g.outs[2].clone())
            .collect();
        assert_eq!(selects.len(), 16);

        let mut vectors = VectorSet::new(rom.inputs.clone());
        for a in 0..16usize {
            let mut row: Vec<bool> = (0..4).map(|i| (a >> (3 - i)) & 1 == 1).collect();
            row.resize(rom.inputs.len(), false);
            vectors.push(row);
        }
        let trace = run(&rom, &vectors, false).unwrap();
        for a in 0..16usize {
            let hot: Vec<usize> = selects
                .iter()
                .enumerate()
                .filter(|(_, w)| trace.value(a, w) == Some(Logic::One))
                .map(|(i, _)| i)
                .collect();
            assert_eq!(hot, vec![a], "address {a}");
        }
    }

    #[test]
    fn rom_reads_back_addressed_word() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for m in [1usize, 2] {
            let rom = build_rom(RomParams { n: 4, m: m as u32, k: 2 }).unwrap();
            let fill: Vec<Vec<bool>> =
                (0..16).map(|_| (0..m).map(|_| rng.gen()).collect()).collect();
            let mut vectors = VectorSet::new(rom.inputs.clone());
            for a in 0..16usize {
                let mut row: Vec<bool> = (0..4).map(|i| (a >> (3 - i)) & 1 == 1).collect();
                for word in &fill {
                    row.extend(word);
                }
                vectors.push(row);
            }
            let trace = run(&rom, &vectors, false).unwrap();
            for (a, word) in fill.iter().enumerate() {
                let outs = trace.select(a, &rom.outputs);
                let expect: Vec<Logic> = word.iter().map(|&b| Logic::from_bool(b)).collect();
                assert_eq!(outs, expect, "m={m} address {a}");
            }
        }
    }

    #[test]
    fn degenerate_rom_still_reads_back() {
        let rom = build_rom(RomParams { n: 2, m: 2, k: 2 }).unwrap();
        assert!(rom.validate().is_empty());
        let fill: Vec<Vec<bool>> = vec![
            vec![true, false],
            vec![false, true],
            vec![true, true],
            vec![false, false],
        ];
        let mut vectors = VectorSet::new(rom.inputs.clone());
        for a in 0..4usize {
            let mut row = vec![a >> 1 & 1 == 1, a & 1 == 1];
            for word in &fill {
                row.extend(word);
            }
            vectors.push(row);
        }
        let trace = run(&rom, &vectors, false).unwrap();
        for (a, word) in fill.iter().enumerate() {
            let outs = trace.select(a, &rom.outputs);
            let expect: Vec<Logic> = word.iter().map(|&b| Logic::from_bool(b)).collect();
            assert_eq!(outs, expect, "address {a}");
        }
        assert!(rom.meta.get("note").is_some());
    }

    #[test]
    fn rom_meta_carries_claims_and_errata() {
        let rom = build_rom(RomParams { n: 4, m: 2, k: 2 }).unwrap();
        assert_eq!(rom.meta["paper_claims"]["gates"], 82);
        assert_eq!(rom.meta["paper_claims"]["transistors"], 522);
        assert_eq!(rom.meta["paper_claims"]["garbage"], 88);
        assert!(!rom.meta["errata"].as_array().unwrap().is_empty());
    }
}
