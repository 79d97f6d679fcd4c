//! Shared value and trace types for the two simulation backends.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Three-valued logic. The functional simulator only ever produces 0/1;
/// the switch-level solver can surface X for uninitialized charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logic {
    Zero,
    One,
    X,
}

impl Logic {
    pub fn from_bool(b: bool) -> Logic {
        if b {
            Logic::One
        } else {
            Logic::Zero
        }
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            Logic::Zero => Some(false),
            Logic::One => Some(true),
            Logic::X => None,
        }
    }

    pub fn invert(self) -> Logic {
        match self {
            Logic::Zero => Logic::One,
            Logic::One => Logic::Zero,
            Logic::X => Logic::X,
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Zero => "0",
            Logic::One => "1",
            Logic::X => "x",
        })
    }
}

/// Ordered input stimulus: one assignment of every listed column per step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<bool>>,
}

impl VectorSet {
    pub fn new(columns: Vec<String>) -> Self {
        VectorSet { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<bool>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Seeded random stimulus, bit-reproducible for a given seed.
    pub fn random(columns: Vec<String>, steps: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = columns.len();
        let rows = (0..steps)
            .map(|_| (0..width).map(|_| rng.gen::<bool>()).collect())
            .collect();
        VectorSet { columns, rows }
    }

    pub fn assignment(&self, step: usize) -> BTreeMap<String, bool> {
        self.columns
            .iter()
            .cloned()
            .zip(self.rows[step].iter().copied())
            .collect()
    }
}

/// Per-step values of every observed signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub columns: Vec<String>,
    pub steps: Vec<Vec<Logic>>,
}

impl Trace {
    pub fn new(columns: Vec<String>) -> Self {
        Trace { columns, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn value(&self, step: usize, name: &str) -> Option<Logic> {
        Some(self.steps[step][self.column(name)?])
    }

    /// Values of a subset of columns at one step, in the requested order.
    pub fn select(&self, step: usize, names: &[String]) -> Vec<Logic> {
        names
            .iter()
            .map(|n| self.value(step, n).unwrap_or(Logic::X))
            .collect()
    }
}
