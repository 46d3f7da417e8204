//! JSON scenario files.
//!
//! ```json
//! {
//!   "id": "name",
//!   "dims": [2, 2],
//!   "factor_labels": ["S_A", "S_B"],          // optional
//!   "state": [[re, im], ...],                 // product(dims) entries
//!   "bases": [{ "name": "A", "outcomes": [{ "label": "h", "vector": [[re, im], ...] }, ...] }],
//!   "contexts": [{ "name": "AB", "members": [["A", 0], ["B", 1]] }],
//!   "constraints": { "X": "ok" }              // optional
//! }
//! ```
//!
//! The state may be off unit norm by at most 1e-6 and is renormalized. Basis
//! vectors must be orthonormal within 1e-6; they are re-orthonormalized in
//! declared order before use. Each observable must sit on the same factor
//! slot in every context that mentions it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use qframes::hilbert::{Factorization, StateVector};
use qframes::measurement::{lift, pvm_from_basis};
use qframes::ComplexScalar as Complex64;
use qframes::{Context, ValueAssignment};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FR_SCENARIO: &str = include_str!("../scenarios/frauchiger_renner.json");

/// Tolerance for hand-written amplitudes and basis vectors.
pub const FILE_TOL: f64 = 1e-6;

/// Largest total dimension accepted from a file.
pub const MAX_DIM: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub id: String,
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_labels: Option<Vec<String>>,
    pub state: Vec<[f64; 2]>,
    pub bases: Vec<BasisSpec>,
    pub contexts: Vec<ContextSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constraints: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub outcomes: Vec<OutcomeSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeSpec {
    pub label: String,
    pub vector: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextSpec {
    pub name: String,
    /// `(observable, factor slot)` pairs.
    pub members: Vec<(String, usize)>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl fmt::Display, message: impl fmt::Display) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.to_string(),
        message: message.to_string(),
    }
}

/// A validated scenario, ready for the library.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub id: String,
    pub state: StateVector<f64>,
    pub contexts: Vec<Context>,
    pub constraints: ValueAssignment,
}

impl Scenario {
    pub fn context(&self, name: &str) -> Option<&Context> {
        self.contexts.iter().find(|c| c.id() == name)
    }
}

pub fn parse(text: &str) -> Result<ScenarioFile, ScenarioError> {
    serde_json::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn load_path(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse(&text)?.validate()
}

pub fn builtin(name: &str) -> Option<&'static str> {
    match name {
        "fr" | "frauchiger-renner" => Some(FR_SCENARIO),
        _ => None,
    }
}

fn complex(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
}

fn check_finite(field: &str, v: &[[f64; 2]]) -> Result<(), ScenarioError> {
    match v
        .iter()
        .position(|[re, im]| !re.is_finite() || !im.is_finite())
    {
        Some(i) => Err(invalid(format!("{field}[{i}]"), "non-finite amplitude")),
        None => Ok(()),
    }
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Modified Gram-Schmidt; inputs are already orthonormal to within `FILE_TOL`.
fn orthonormalize(vectors: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vectors.len());
    for mut w in vectors {
        for u in &out {
            let p = inner(u, &w);
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= p * ui;
            }
        }
        let n = inner(&w, &w).re.sqrt();
        out.push(w.into_iter().map(|z| z / n).collect());
    }
    out
}

impl ScenarioFile {
    pub fn validate(&self) -> Result<Scenario, ScenarioError> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(invalid("dims", "factor dimensions must be positive"));
        }
        let total = self
            .dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .filter(|&t| t <= MAX_DIM)
            .ok_or_else(|| invalid("dims", format!("total dimension exceeds {MAX_DIM}")))?;
        let labels = match &self.factor_labels {
            Some(l) if l.len() != self.dims.len() => {
                return Err(invalid(
                    "factor_labels",
                    format!("{} labels for {} factors", l.len(), self.dims.len()),
                ))
            }
            Some(l) => l.clone(),
            None => (0..self.dims.len()).map(|i| i.to_string()).collect(),
        };
        let factorization =
            Factorization::new(self.dims.clone(), labels).map_err(|e| invalid("dims", e))?;

        if self.state.len() != total {
            return Err(invalid(
                "state",
                format!("{} amplitudes for dimension {total}", self.state.len()),
            ));
        }
        check_finite("state", &self.state)?;
        let amps = complex(&self.state);
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > FILE_TOL {
            return Err(invalid(
                "state",
                format!("squared norm {norm_sqr} is not within {FILE_TOL} of 1"),
            ));
        }
        let state =
            StateVector::normalize(amps, factorization.clone()).map_err(|e| invalid("state", e))?;

        let mut local = BTreeMap::new();
        for (bi, basis) in self.bases.iter().enumerate() {
            let field = format!("bases[{bi}]");
            if local.contains_key(&basis.name) {
                return Err(invalid(
                    &field,
                    format!("duplicate basis name {}", basis.name),
                ));
            }
            let dim = basis.outcomes.len();
            if dim == 0 {
                return Err(invalid(&field, "no outcomes"));
            }
            let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
            for (oi, o) in basis.outcomes.iter().enumerate() {
                let of = format!("{field}.outcomes[{oi}]");
                if basis.outcomes[..oi].iter().any(|p| p.label == o.label) {
                    return Err(invalid(&of, format!("duplicate label {}", o.label)));
                }
                if o.vector.len() != dim {
                    return Err(invalid(
                        format!("{of}.vector"),
                        format!("length {} but the basis has {dim} outcomes", o.vector.len()),
                    ));
                }
                check_finite(&format!("{of}.vector"), &o.vector)?;
                let v = complex(&o.vector);
                let n = inner(&v, &v).re;
                if (n - 1.0).abs() > FILE_TOL {
                    return Err(invalid(
                        format!("{of}.vector"),
                        format!("squared norm {n} is not within {FILE_TOL} of 1"),
                    ));
                }
                for (pi, prev) in vectors.iter().enumerate() {
                    let overlap = inner(prev, &v).norm();
                    if overlap > FILE_TOL {
                        return Err(invalid(
                            format!("{of}.vector"),
                            format!(
                                "not orthogonal to {} (overlap {overlap:.3e})",
                                basis.outcomes[pi].label
                            ),
                        ));
                    }
                }
                vectors.push(v);
            }
            let single = Factorization::single(dim);
            let labelled = orthonormalize(vectors)
                .into_iter()
                .zip(&basis.outcomes)
                .map(|(v, o)| {
                    StateVector::new(v, single.clone())
                        .map(|s| (o.label.clone(), s))
                        .map_err(|e| invalid(&field, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let pvm = pvm_from_basis(&basis.name, &labelled).map_err(|e| invalid(&field, e))?;
            local.insert(basis.name.clone(), pvm);
        }

        let mut slots: BTreeMap<&str, usize> = BTreeMap::new();
        let mut contexts = Vec::with_capacity(self.contexts.len());
        for (ci, spec) in self.contexts.iter().enumerate() {
            let field = format!("contexts[{ci}]");
            if self.contexts[..ci].iter().any(|c| c.name == spec.name) {
                return Err(invalid(
                    &field,
                    format!("duplicate context name {}", spec.name),
                ));
            }
            if spec.members.is_empty() {
                return Err(invalid(&field, "no members"));
            }
            let mut pvms = Vec::with_capacity(spec.members.len());
            for (mi, (obs, slot)) in spec.members.iter().enumerate() {
                let mf = format!("{field}.members[{mi}]");
                let pvm = local
                    .get(obs)
                    .ok_or_else(|| invalid(&mf, format!("unknown basis {obs}")))?;
                if *slot >= self.dims.len() {
                    return Err(invalid(&mf, format!("slot {slot} out of range")));
                }
                if let Some(prev) = slots.insert(obs, *slot) {
                    if prev != *slot {
                        return Err(invalid(
                            &mf,
                            format!("{obs} used on slot {slot} here but slot {prev} elsewhere"),
                        ));
                    }
                }
                pvms.push(lift(pvm, &factorization, *slot).map_err(|e| invalid(&mf, e))?);
            }
            contexts.push(Context::new(spec.name.clone(), pvms).map_err(|e| invalid(&field, e))?);
        }

        let constraints =
            self.constraint_assignment("constraints", &self.constraints, &slots, &local)?;
        Ok(Scenario {
            id: self.id.clone(),
            state,
            contexts,
            constraints,
        })
    }

    fn constraint_assignment(
        &self,
        field: &str,
        pairs: &BTreeMap<String, String>,
        slots: &BTreeMap<&str, usize>,
        local: &BTreeMap<String, qframes::Pvm>,
    ) -> Result<ValueAssignment, ScenarioError> {
        let mut out = ValueAssignment::new();
        for (obs, label) in pairs {
            let f = format!("{field}.{obs}");
            if !slots.contains_key(obs.as_str()) {
                return Err(invalid(&f, format!("{obs} is not used by any context")));
            }
            if !local[obs].labels().contains(label) {
                return Err(invalid(&f, format!("{obs} has no outcome {label}")));
            }
            out.insert(obs.clone(), label.clone());
        }
        Ok(out)
    }
}

/// Parses `OBS=LABEL`.
pub fn parse_fix(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((o, l)) if !o.trim().is_empty() && !l.trim().is_empty() => {
            Ok((o.trim().to_string(), l.trim().to_string()))
        }
        _ => Err(format!("expected OBSERVABLE=LABEL, got {s:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qframes::frames::build_support_table;
    use qframes::scenarios::{fr_state, fr_support_table};

    #[test]
    fn builtin_fr_matches_library_construction() {
        let s = parse(FR_SCENARIO).unwrap().validate().unwrap();
        assert!(s.state.max_abs_diff(&fr_state()) < 1e-15);
        let from_file = build_support_table(&s.state, &s.contexts, 1e-9).unwrap();
        let reference = fr_support_table(1e-9).unwrap();
        for (a, b) in from_file.rows().iter().zip(reference.rows()) {
            assert_eq!(a.context, b.context);
            assert_eq!(a.support, b.support);
        }
    }

    fn fr_file() -> ScenarioFile {
        parse(FR_SCENARIO).unwrap()
    }

    fn field_of(err: ScenarioError) -> String {
        match err {
            ScenarioError::Invalid { field, .. } => field,
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let mut f = fr_file();
        f.bases[2].outcomes[1].vector = vec![[0.6, 0.0], [0.8, 0.0]];
        assert_eq!(
            field_of(f.validate().unwrap_err()),
            "bases[2].outcomes[1].vector"
        );
    }

    #[test]
    fn rejects_unnormalized_state() {
        let mut f = fr_file();
        f.state[1] = [0.1, 0.0];
        assert_eq!(field_of(f.validate().unwrap_err()), "state");
    }

    #[test]
    fn renormalizes_small_deviation() {
        let mut f = fr_file();
        f.state[0] = [0.57735, 0.0];
        let s = f.validate().unwrap();
        assert!((s.state.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_references() {
        let mut f = fr_file();
        f.contexts[0].members[0].0 = "Q".into();
        assert_eq!(
            field_of(f.validate().unwrap_err()),
            "contexts[0].members[0]"
        );

        let mut f = fr_file();
        f.contexts[1].members[0].1 = 1;
        assert!(f.validate().is_err());

        let mut f = fr_file();
        f.constraints.insert("X".into(), "maybe".into());
        assert_eq!(field_of(f.validate().unwrap_err()), "constraints.X");
    }

    #[test]
    fn rejects_non_commuting_context() {
        let mut f = fr_file();
        f.contexts[0].members = vec![("A".into(), 0), ("X".into(), 0)];
        assert_eq!(field_of(f.validate().unwrap_err()), "contexts[0]");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("{\n  \"id\": 3\n}") {
            Err(ScenarioError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("{\"id\":\"x\",\"bogus\":1}"),
            Err(ScenarioError::Parse { .. })
        ));
    }

    #[test]
    fn fix_flags() {
        assert_eq!(parse_fix("X=ok").unwrap(), ("X".into(), "ok".into()));
        assert!(parse_fix("X").is_err());
        assert!(parse_fix("=ok").is_err());
    }
}
