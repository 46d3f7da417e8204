//! Machine-readable command reports.

use std::collections::BTreeMap;

use qframes::frames::SupportRow;
use qframes::{ContradictionCertificate, OutcomeDistribution, ValueAssignment};
use serde::{Deserialize, Serialize};

use crate::render::exact_fraction;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub scenario: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alice_bob_outcome: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contexts: Vec<ContextReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignments: Option<Vec<ValueAssignment>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<ContradictionCertificate>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub probabilities: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chsh: Option<ChshReport>,
}

impl Report {
    pub fn new(command: &str, scenario: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            scenario: scenario.to_string(),
            seed: None,
            tolerance: None,
            mode: None,
            alice_bob_outcome: None,
            contexts: Vec::new(),
            consistent: None,
            assignments: None,
            certificate: None,
            probabilities: BTreeMap::new(),
            samples: None,
            chsh: None,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityEntry {
    pub outcome: String,
    pub probability: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl ProbabilityEntry {
    pub fn new(outcome: String, probability: f64) -> Self {
        Self {
            exact: exact_fraction(probability),
            outcome,
            probability,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContextReport {
    pub id: String,
    pub observables: Vec<String>,
    pub distribution: Vec<ProbabilityEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<String>>,
}

impl ContextReport {
    pub fn from_distribution(id: &str, observables: &[String], dist: &OutcomeDistribution) -> Self {
        Self {
            id: id.to_string(),
            observables: observables.to_vec(),
            distribution: dist
                .iter()
                .map(|(o, p)| ProbabilityEntry::new(o.to_string(), p))
                .collect(),
            support: None,
        }
    }

    pub fn from_row(row: &SupportRow<f64>) -> Self {
        let mut r = Self::from_distribution(&row.context, &row.observables, &row.distribution);
        r.support = Some(row.support.iter().map(ToString::to_string).collect());
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub outcome: String,
    pub count: usize,
    pub frequency: f64,
    pub born: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub context: String,
    pub n: usize,
    pub rows: Vec<SampleRow>,
    /// Outcome of the first draw.
    pub first: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshReport {
    pub state: String,
    pub restarts: usize,
    /// `[a, a′, b, b′]` in radians.
    pub setting: [f64; 4],
    pub value: f64,
    pub classical_bound: f64,
    pub tsirelson_bound: f64,
}
