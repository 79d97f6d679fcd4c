//! Reversible gate library.
//!
//! Every gate computes a bijection on `{0,1}^width`. Port order follows the
//! usual A,B,C,D convention with A first, and bit vectors are written most
//! significant symbol first, so `Bits::from_index(4, 0b1010)` is the input
//! row (A=1, B=0, C=1, D=0).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Ordered sequence of bits, most significant symbol first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// Bit vector of `width` bits spelling `index` in binary, MSB first.
    pub fn from_index(width: usize, index: usize) -> Self {
        Bits((0..width).map(|i| (index >> (width - 1 - i)) & 1 == 1).collect())
    }

    /// Row index of this vector in a truth table (MSB-first weighting).
    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

impl From<&[bool]> for Bits {
    fn from(bits: &[bool]) -> Self {
        Bits(bits.to_vec())
    }
}

impl<const N: usize> From<[u8; N]> for Bits {
    fn from(bits: [u8; N]) -> Self {
        Bits(bits.iter().map(|&b| b != 0).collect())
    }
}

impl std::ops::Index<usize> for Bits {
    type Output = bool;
    fn index(&self, i: usize) -> &bool {
        &self.0[i]
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// The gate kinds known to the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    Feynman,
    Fredkin,
    Toffoli,
    Hl,
    Np,
}

impl GateKind {
    pub const ALL: [GateKind; 6] = [
        GateKind::Not,
        GateKind::Feynman,
        GateKind::Fredkin,
        GateKind::Toffoli,
        GateKind::Hl,
        GateKind::Np,
    ];

    pub fn width(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Feynman => 2,
            GateKind::Fredkin | GateKind::Toffoli => 3,
            GateKind::Hl | GateKind::Np => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::Feynman => "FEYNMAN",
            GateKind::Fredkin => "FREDKIN",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::Hl => "HL",
            GateKind::Np => "NP",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = GateError;
    fn from_str(s: &str) -> Result<Self, GateError> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| GateError::UnknownKind(s.to_string()))
    }
}

/// Per-gate cost metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub width: usize,
    pub quantum_cost: usize,
    /// Logical depth in delta units.
    pub delay: usize,
    pub transistor_count: usize,
}

/// Cost table used by the analyzer. The defaults are the library constants;
/// individual entries can be overridden for what-if accounting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostModel {
    specs: [GateSpec; 6],
}

impl Default for CostModel {
    fn default() -> Self {
        const fn spec(kind: GateKind, qc: usize, delay: usize, tc: usize) -> GateSpec {
            GateSpec {
                kind,
                width: kind.width_const(),
                quantum_cost: qc,
                delay,
                transistor_count: tc,
            }
        }
        CostModel {
            specs: [
                spec(GateKind::Not, 1, 1, 2),
                spec(GateKind::Feynman, 1, 1, 3),
                spec(GateKind::Fredkin, 5, 5, 4),
                spec(GateKind::Toffoli, 5, 5, 5),
                spec(GateKind::Hl, 7, 7, 13),
                spec(GateKind::Np, 5, 5, 9),
            ],
        }
    }
}

impl GateKind {
    const fn width_const(self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::Feynman => 2,
            GateKind::Fredkin | GateKind::Toffoli => 3,
            GateKind::Hl | GateKind::Np => 4,
        }
    }

    const fn table_slot(self) -> usize {
        match self {
            GateKind::Not => 0,
            GateKind::Feynman => 1,
            GateKind::Fredkin => 2,
            GateKind::Toffoli => 3,
            GateKind::Hl => 4,
            GateKind::Np => 5,
        }
    }
}

impl CostModel {
    pub fn spec(&self, kind: GateKind) -> GateSpec {
        self.specs[kind.table_slot()]
    }

    pub fn set(&mut self, spec: GateSpec) {
        self.specs[spec.kind.table_slot()] = spec;
    }
}

/// Cost metadata for `kind` under the default cost table.
pub fn metadata(kind: GateKind) -> GateSpec {
    CostModel::default().spec(kind)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GateError {
    #[error("{kind} expects {expected} bits, got {got}")]
    WidthMismatch {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("unknown gate kind `{0}`")]
    UnknownKind(String),
}

fn check_width(kind: GateKind, got: usize) -> Result<(), GateError> {
    if got != kind.width() {
        return Err(GateError::WidthMismatch {
            kind,
            expected: kind.width(),
            got,
        });
    }
    Ok(())
}

// Forward semantics, in the branch form used for transistor realization.
// HL has an equivalent algebraic form (P = AB' + B'C + BD' etc.) exercised
// by the tests; NP likewise (Q = A'B + AC', R = A'C + AB, S = R + D).
pub(crate) fn eval_slice(kind: GateKind, v: &[bool]) -> Vec<bool> {
    match kind {
        GateKind::Not => vec![!v[0]],
        GateKind::Feynman => {
            let (a, b) = (v[0], v[1]);
            vec![a, a ^ b]
        }
        GateKind::Fredkin => {
            let (a, b, c) = (v[0], v[1], v[2]);
            if a {
                vec![a, c, b]
            } else {
                vec![a, b, c]
            }
        }
        GateKind::Toffoli => {
            let (a, b, c) = (v[0], v[1], v[2]);
            vec![a, b, (a && b) ^ c]
        }
        GateKind::Hl => {
            let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
            if b {
                vec![!d, a ^ d, !a ^ d, c]
            } else {
                vec![a ^ c, c, c, a ^ d]
            }
        }
        GateKind::Np => {
            let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
            if a {
                vec![a, !c, b, b ^ d]
            } else {
                vec![a, b, c, c ^ d]
            }
        }
    }
}

// Inverse permutation, also in branch form. FEYNMAN, FREDKIN and TOFFOLI
// are self-inverse; HL and NP are not.
pub(crate) fn backward_slice(kind: GateKind, v: &[bool]) -> Vec<bool> {
    match kind {
        GateKind::Not | GateKind::Feynman | GateKind::Fredkin | GateKind::Toffoli => {
            eval_slice(kind, v)
        }
        GateKind::Hl => {
            let (p, q, r, s) = (v[0], v[1], v[2], v[3]);
            let b = q ^ r;
            if b {
                let d = !p;
                vec![q ^ d, b, s, d]
            } else {
                let a = p ^ q;
                vec![a, b, q, s ^ a]
            }
        }
        GateKind::Np => {
            let (p, q, r, s) = (v[0], v[1], v[2], v[3]);
            if p {
                vec![p, r, !q, r ^ s]
            } else {
                vec![p, q, r, r ^ s]
            }
        }
    }
}

/// Evaluate one gate on an input vector.
pub fn eval_gate(kind: GateKind, inputs: &Bits) -> Result<Bits, GateError> {
    check_width(kind, inputs.len())?;
    Ok(Bits::new(eval_slice(kind, inputs.as_slice())))
}

/// Recover the unique input vector producing `outputs`.
pub fn eval_backward(kind: GateKind, outputs: &Bits) -> Result<Bits, GateError> {
    check_width(kind, outputs.len())?;
    Ok(Bits::new(backward_slice(kind, outputs.as_slice())))
}

/// True iff `map` (indexed by input row) is a bijection on `{0,1}^w`.
pub fn is_reversible(map: &[Bits]) -> bool {
    let rows = map.len();
    if rows == 0 || !rows.is_power_of_two() {
        return false;
    }
    let width = rows.trailing_zeros() as usize;
    let mut seen = vec![false; rows];
    for out in map {
        if out.len() != width {
            return false;
        }
        let idx = out.to_index();
        if seen[idx] {
            return false;
        }
        seen[idx] = true;
    }
    true
}

/// Full truth table of `kind` in ascending input order.
pub fn truth_table(kind: GateKind) -> Vec<(Bits, Bits)> {
    let w = kind.width();
    (0..1usize << w)
        .map(|i| {
            let input = Bits::from_index(w, i);
            let output = Bits::new(eval_slice(kind, input.as_slice()));
            (input, output)
        })
        .collect()
}
