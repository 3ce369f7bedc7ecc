//! The JSON report printed by every command.

use serde::Serialize;

use crate::io::JetFile;
use crate::rational::{self, Rational};
use crate::witness::JetWitness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// An expected nonzero coefficient exhibiting an obstruction or a
    /// negative answer; not a failure.
    Witness,
}

/// A nonzero coefficient, 1-based indices. `exps` is absent for constant
/// (pointwise) tensors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exps: Option<Vec<u16>>,
    pub v: String,
}

impl From<&JetWitness> for WitnessEntry {
    fn from(w: &JetWitness) -> Self {
        WitnessEntry {
            indices: w.indices.iter().map(|i| i + 1).collect(),
            exps: Some(w.exponents.clone()),
            v: rational::to_string(&w.value),
        }
    }
}

impl WitnessEntry {
    pub fn constant(indices: &[usize], v: &Rational) -> Self {
        WitnessEntry {
            indices: indices.iter().map(|i| i + 1).collect(),
            exps: None,
            v: rational::to_string(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Highest jet degree the check covers; `0` for pointwise checks,
    /// absent for purely algebraic ones.
    pub order_checked: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, status: Status, order_checked: Option<u32>) -> Self {
        Check {
            name: name.to_string(),
            status,
            order_checked,
            witness: None,
            detail: None,
        }
    }

    /// Passes when there is no residual witness, fails otherwise.
    pub fn vanishing(name: &str, order_checked: Option<u32>, residual: Option<WitnessEntry>) -> Self {
        let status = if residual.is_some() { Status::Fail } else { Status::Pass };
        Check {
            witness: residual,
            ..Check::new(name, status, order_checked)
        }
    }

    pub fn holds(name: &str, order_checked: Option<u32>, ok: bool) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, order_checked)
    }

    pub fn with_witness(mut self, w: Option<WitnessEntry>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Which components of an operator are nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub components: String,
    pub weyl_nonzero_entries: usize,
    pub ricci_sym: Vec<Vec<String>>,
    pub ricci_alt: Vec<Vec<String>>,
    pub projectively_flat: bool,
    pub ricci_symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub components: String,
    pub method: String,
    pub verdict: String,
    pub expected: String,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub m: usize,
    pub order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_potential: Option<JetFile>,
}

impl Report {
    pub fn new(command: String, seed: Option<u64>, m: usize, order: Option<u32>) -> Self {
        Report {
            command,
            seed,
            m,
            order,
            summary: None,
            checks: Vec::new(),
            rows: Vec::new(),
            volume_potential: None,
        }
    }

    pub fn failed(&self) -> bool {
        let row_failed = self.rows.iter().flat_map(|r| &r.checks);
        self.checks.iter().chain(row_failed).any(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}
