//! Boolean frames: contexts of commuting observables, their possibilistic
//! support, and the search for a single-world value assignment that every
//! context admits at once.
//!
//! Only zero/nonzero probabilities matter here. A [`SupportTable`] records,
//! per context, which joint outcomes are possible; [`global_assignments`]
//! enumerates the assignments consistent with all rows, and
//! [`hardy_certificate`] explains an empty enumeration as a chain of forced
//! values ending in an impossible joint outcome.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Operator, StateVector};
use crate::measurement::{born, join, Outcome, OutcomeDistribution, Pvm};
use crate::scalar::Real;

/// `‖PQ − QP‖_max ≤ tol`.
pub fn commutes<T: Real>(p: &Operator<T>, q: &Operator<T>, tol: T) -> Result<bool> {
    p.commutes_with(q, tol)
}

/// A set of pairwise commuting measurements and their joint PVM.
#[derive(Clone, Debug, PartialEq)]
pub struct Context<T> {
    id: String,
    pvms: Vec<Pvm<T>>,
    joint: Pvm<T>,
}

impl<T: Real> Context<T> {
    /// Fails if any two member PVMs fail to commute or share an observable.
    pub fn new(id: impl Into<String>, pvms: Vec<Pvm<T>>) -> Result<Self> {
        let id = id.into();
        let (first, rest) = pvms
            .split_first()
            .ok_or_else(|| Error::EmptyContext(id.clone()))?;
        let mut joint = first.clone();
        for p in rest {
            if let Some(dup) = p
                .observables()
                .iter()
                .find(|o| joint.observables().contains(o))
            {
                return Err(Error::InvalidArgument(format!(
                    "observable {dup} appears twice in context {id}"
                )));
            }
            joint = join(&joint, p)?;
        }
        Ok(Self { id, pvms, joint })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pvms(&self) -> &[Pvm<T>] {
        &self.pvms
    }

    pub fn joint(&self) -> &Pvm<T> {
        &self.joint
    }

    pub fn observables(&self) -> &[String] {
        self.joint.observables()
    }
}

/// One observable together with its outcome labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableInfo {
    pub id: String,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportRow<T> {
    pub context: String,
    pub observables: Vec<String>,
    pub distribution: OutcomeDistribution<T>,
    pub support: Vec<Outcome>,
}

impl<T> SupportRow<T> {
    pub fn is_possible(&self, outcome: &Outcome) -> bool {
        self.support.contains(outcome)
    }
}

/// Per-context possible outcomes of one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportTable<T> {
    state: StateVector<T>,
    tol: T,
    observables: Vec<ObservableInfo>,
    rows: Vec<SupportRow<T>>,
}

impl<T: Real> SupportTable<T> {
    pub fn state(&self) -> &StateVector<T> {
        &self.state
    }

    pub fn tolerance(&self) -> T {
        self.tol
    }

    /// Observables mentioned by any context, sorted by id.
    pub fn observables(&self) -> &[ObservableInfo] {
        &self.observables
    }

    pub fn rows(&self) -> &[SupportRow<T>] {
        &self.rows
    }

    pub fn row(&self, context: &str) -> Option<&SupportRow<T>> {
        self.rows.iter().find(|r| r.context == context)
    }

    fn observable(&self, id: &str) -> Result<&ObservableInfo> {
        self.observables
            .iter()
            .find(|o| o.id == id)
            .ok_or_else(|| Error::UnknownObservable(id.to_string()))
    }

    fn check_partial(&self, partial: &ValueAssignment) -> Result<()> {
        for (obs, label) in partial.iter() {
            let info = self.observable(obs)?;
            if !info.labels.contains(label) {
                return Err(Error::UnknownOutcome {
                    observable: obs.clone(),
                    outcome: label.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Builds one support row per context: outcomes with Born probability `> tol`.
pub fn build_support_table<T: Real>(
    state: &StateVector<T>,
    contexts: &[Context<T>],
    tol: T,
) -> Result<SupportTable<T>> {
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "support tolerance {tol} outside (0, 1)"
        )));
    }
    // observable id -> (labels, lifted projectors) for cross-context consistency
    let mut seen: BTreeMap<String, &Pvm<T>> = BTreeMap::new();
    let mut rows = Vec::with_capacity(contexts.len());
    for ctx in contexts {
        if ctx.joint.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                expected: state.dim(),
                found: ctx.joint.dim(),
            });
        }
        if rows.iter().any(|r: &SupportRow<T>| r.context == ctx.id) {
            return Err(Error::InvalidArgument(format!(
                "duplicate context id {}",
                ctx.id
            )));
        }
        for pvm in &ctx.pvms {
            if pvm.observables().len() != 1 {
                return Err(Error::InvalidArgument(format!(
                    "context {} member {} must be a single observable",
                    ctx.id,
                    pvm.id()
                )));
            }
            let id = &pvm.observables()[0];
            match seen.get(id) {
                Some(prev) => {
                    if !same_measurement(prev, pvm) {
                        return Err(Error::InconsistentObservable(id.clone()));
                    }
                }
                None => {
                    seen.insert(id.clone(), pvm);
                }
            }
        }
        let distribution = born(&ctx.joint, state)?;
        let support = distribution
            .iter()
            .filter(|(_, p)| *p > tol)
            .map(|(o, _)| o.clone())
            .collect();
        rows.push(SupportRow {
            context: ctx.id.clone(),
            observables: ctx.observables().to_vec(),
            distribution,
            support,
        });
    }
    let observables = seen
        .into_iter()
        .map(|(id, pvm)| ObservableInfo {
            id,
            labels: pvm.labels(),
        })
        .collect();
    Ok(SupportTable {
        state: state.clone(),
        tol,
        observables,
        rows,
    })
}

fn same_measurement<T: Real>(a: &Pvm<T>, b: &Pvm<T>) -> bool {
    a.labels() == b.labels()
        && a.elements()
            .iter()
            .zip(b.elements())
            .all(|(x, y)| x.projector.max_abs_diff(&y.projector) <= T::structural_tol())
}

/// Observable id → outcome label; partial or total.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueAssignment(BTreeMap<String, String>);

impl ValueAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        Self(
            pairs
                .into_iter()
                .map(|(k, v)| (k.into(), v.into()))
                .collect(),
        )
    }

    pub fn get(&self, observable: &str) -> Option<&str> {
        self.0.get(observable).map(String::as_str)
    }

    pub fn insert(&mut self, observable: impl Into<String>, label: impl Into<String>) {
        self.0.insert(observable.into(), label.into());
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Tuple of assigned values for `observables`, or `None` if any is unassigned.
    pub fn restrict(&self, observables: &[String]) -> Option<Outcome> {
        observables
            .iter()
            .map(|o| self.0.get(o).cloned())
            .collect::<Option<Vec<_>>>()
            .map(Outcome::new)
    }

    fn agrees_with(&self, observables: &[String], outcome: &Outcome) -> bool {
        observables
            .iter()
            .zip(outcome.labels())
            .all(|(o, l)| self.0.get(o).is_none_or(|v| v == l))
    }
}

impl fmt::Display for ValueAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// All total assignments extending `constraints` whose restriction to every
/// context lies in that context's support.
///
/// Observables are enumerated in id order, labels in declared order, so the
/// output is lexicographic in (observable, label index).
pub fn global_assignments<T: Real>(
    table: &SupportTable<T>,
    constraints: &ValueAssignment,
) -> Result<Vec<ValueAssignment>> {
    table.check_partial(constraints)?;
    let free: Vec<&ObservableInfo> = table
        .observables
        .iter()
        .filter(|o| constraints.get(&o.id).is_none())
        .collect();
    let mut found = Vec::new();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut candidate = constraints.clone();
        for (info, &i) in free.iter().zip(&idx) {
            candidate.insert(info.id.clone(), info.labels[i].clone());
        }
        let consistent = table.rows.iter().all(|row| {
            candidate
                .restrict(&row.observables)
                .is_some_and(|t| row.is_possible(&t))
        });
        if consistent {
            found.push(candidate);
        }
        // odometer, last observable fastest
        let mut k = free.len();
        loop {
            if k == 0 {
                return Ok(found);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < free[k].labels.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Number of total assignments extending `constraints`.
fn assignment_space<T: Real>(table: &SupportTable<T>, constraints: &ValueAssignment) -> usize {
    table
        .observables
        .iter()
        .filter(|o| constraints.get(&o.id).is_none())
        .map(|o| o.labels.len())
        .product()
}

/// One unit-propagation step: within `context`, every tuple in `excluded` is
/// impossible, which leaves `value` as the only option for `observable`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForcedStep {
    pub context: String,
    pub excluded: Vec<Outcome>,
    pub observable: String,
    pub value: String,
}

/// A context whose support excludes the accumulated assignment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub context: String,
    pub outcome: Outcome,
}

/// Proof that no global assignment extends `premise`.
///
/// With `violated` present the proof is the replayable chain in `steps`.
/// Without it, unit propagation stalled and the proof is the exhaustive check
/// of `assignments_checked` candidates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContradictionCertificate {
    pub premise: ValueAssignment,
    pub steps: Vec<ForcedStep>,
    pub violated: Option<Violation>,
    pub assignments_checked: usize,
}

impl ContradictionCertificate {
    /// Final assignment reached by the chain.
    pub fn conclusion(&self) -> ValueAssignment {
        let mut a = self.premise.clone();
        for s in &self.steps {
            a.insert(s.observable.clone(), s.value.clone());
        }
        a
    }

    /// Re-derives every step from `table` and checks the final violation.
    pub fn replay<T: Real>(&self, table: &SupportTable<T>) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidCertificate(m));
        table.check_partial(&self.premise)?;
        let Some(violated) = &self.violated else {
            if !self.steps.is_empty() {
                return fail("steps without a violated context".into());
            }
            if !global_assignments(table, &self.premise)?.is_empty() {
                return fail("premise extends to a global assignment".into());
            }
            return Ok(());
        };
        let mut assignment = self.premise.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let Some(row) = table.row(&step.context) else {
                return fail(format!("step {i}: unknown context {}", step.context));
            };
            let Some(pos) = row.observables.iter().position(|o| *o == step.observable) else {
                return fail(format!(
                    "step {i}: {} not in context {}",
                    step.observable, step.context
                ));
            };
            if assignment.get(&step.observable).is_some() {
                return fail(format!("step {i}: {} already assigned", step.observable));
            }
            let mut excluded = Vec::new();
            let mut witness = false;
            for tuple in context_tuples(table, &row.observables)? {
                if !assignment.agrees_with(&row.observables, &tuple) {
                    continue;
                }
                if tuple.labels()[pos] == step.value {
                    witness |= row.is_possible(&tuple);
                } else {
                    excluded.push(tuple);
                }
            }
            if let Some(t) = excluded.iter().find(|t| row.is_possible(t)) {
                return fail(format!("step {i}: {t} is possible in {}", step.context));
            }
            if excluded != step.excluded {
                return fail(format!("step {i}: excluded tuples do not match"));
            }
            if !witness {
                return fail(format!(
                    "step {i}: forced value {}={} is itself impossible",
                    step.observable, step.value
                ));
            }
            assignment.insert(step.observable.clone(), step.value.clone());
        }
        let Some(row) = table.row(&violated.context) else {
            return fail(format!("unknown violated context {}", violated.context));
        };
        if assignment.restrict(&row.observables).as_ref() != Some(&violated.outcome) {
            return fail("violated tuple is not the accumulated assignment".into());
        }
        if row.is_possible(&violated.outcome) {
            return fail(format!(
                "{} is possible in {}",
                violated.outcome, violated.context
            ));
        }
        Ok(())
    }
}

/// Every outcome tuple of a context in declared order.
fn context_tuples<T: Real>(
    table: &SupportTable<T>,
    observables: &[String],
) -> Result<Vec<Outcome>> {
    let mut tuples = vec![Vec::<String>::new()];
    for id in observables {
        let info = table.observable(id)?;
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                info.labels.iter().map(move |l| {
                    let mut t = prefix.clone();
                    t.push(l.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples.into_iter().map(Outcome::new).collect())
}

/// Explains why no global assignment extends `premise`, or returns `None` if one does.
///
/// Unit propagation scans contexts in declaration order and, within a
/// context, observables in declaration order; the first observable left with
/// exactly one possible value is fixed. Before each scan every fully assigned
/// context is checked against its support. If propagation stalls, the
/// certificate carries no chain and rests on the exhaustive enumeration.
pub fn hardy_certificate<T: Real>(
    table: &SupportTable<T>,
    premise: &ValueAssignment,
) -> Result<Option<ContradictionCertificate>> {
    if !global_assignments(table, premise)?.is_empty() {
        return Ok(None);
    }
    let checked = assignment_space(table, premise);
    let mut assignment = premise.clone();
    let mut steps = Vec::new();
    loop {
        for row in &table.rows {
            if let Some(t) = assignment.restrict(&row.observables) {
                if !row.is_possible(&t) {
                    return Ok(Some(ContradictionCertificate {
                        premise: premise.clone(),
                        steps,
                        violated: Some(Violation {
                            context: row.context.clone(),
                            outcome: t,
                        }),
                        assignments_checked: checked,
                    }));
                }
            }
        }
        match next_forced(table, &assignment)? {
            Some(step) => {
                assignment.insert(step.observable.clone(), step.value.clone());
                steps.push(step);
            }
            None => {
                return Ok(Some(ContradictionCertificate {
                    premise: premise.clone(),
                    steps: Vec::new(),
                    violated: None,
                    assignments_checked: checked,
                }))
            }
        }
    }
}

fn next_forced<T: Real>(
    table: &SupportTable<T>,
    assignment: &ValueAssignment,
) -> Result<Option<ForcedStep>> {
    for row in &table.rows {
        let tuples = context_tuples(table, &row.observables)?;
        for (pos, obs) in row.observables.iter().enumerate() {
            if assignment.get(obs).is_some() {
                continue;
            }
            let consistent: Vec<&Outcome> = tuples
                .iter()
                .filter(|t| assignment.agrees_with(&row.observables, t))
                .collect();
            let mut options: Vec<&String> = consistent
                .iter()
                .filter(|t| row.is_possible(t))
                .map(|t| &t.labels()[pos])
                .collect();
            options.dedup();
            options.sort();
            options.dedup();
            if let [value] = options[..] {
                let excluded = consistent
                    .iter()
                    .filter(|t| t.labels()[pos] != *value)
                    .map(|t| (*t).clone())
                    .collect();
                return Ok(Some(ForcedStep {
                    context: row.context.clone(),
                    excluded,
                    observable: obs.clone(),
                    value: value.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// How a family of contexts overlaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwinement {
    /// `(i, j, observable)` for every pair of contexts sharing an observable.
    pub shared: Vec<(usize, usize, String)>,
    pub total_observables: usize,
    pub largest_context: usize,
    /// Contexts form one component when linked through shared observables.
    pub connected: bool,
}

impl Intertwinement {
    /// Connected through shared observables, yet no one context holds them all.
    pub fn is_intertwined(&self) -> bool {
        self.connected && !self.shared.is_empty() && self.largest_context < self.total_observables
    }
}

pub fn intertwinement<T: Real>(contexts: &[Context<T>]) -> Intertwinement {
    let mut shared = Vec::new();
    for i in 0..contexts.len() {
        for j in i + 1..contexts.len() {
            for o in contexts[i].observables() {
                if contexts[j].observables().contains(o) {
                    shared.push((i, j, o.clone()));
                }
            }
        }
    }
    let mut all: Vec<&String> = contexts.iter().flat_map(|c| c.observables()).collect();
    all.sort();
    all.dedup();

    let mut reached = vec![false; contexts.len()];
    if !contexts.is_empty() {
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for (i, j, _) in &shared {
                if reached[*i] != reached[*j] {
                    reached[*i] = true;
                    reached[*j] = true;
                    changed = true;
                }
            }
        }
    }
    Intertwinement {
        shared,
        total_observables: all.len(),
        largest_context: contexts
            .iter()
            .map(|c| c.observables().len())
            .max()
            .unwrap_or(0),
        connected: reached.iter().all(|&r| r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::{fr_contexts, fr_observables, fr_state};

    fn fr_table() -> SupportTable<f64> {
        build_support_table(&fr_state(), &fr_contexts(), 1e-9).unwrap()
    }

    fn rendered(row: &SupportRow<f64>) -> Vec<String> {
        row.support.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn commutation_checks() {
        let obs = fr_observables::<f64>();
        let h = obs.a.projector(&"h".into()).unwrap();
        let ok_b = obs.y.projector(&"ok".into()).unwrap();
        assert!(commutes(h, ok_b, 1e-9).unwrap());
        let h1 = obs.a_local.projector(&"h".into()).unwrap();
        let ok1 = obs.x_local.projector(&"ok".into()).unwrap();
        assert!(!commutes(h1, ok1, 1e-9).unwrap());
        assert!(commutes(ok1, ok1, 0.0).unwrap());
        assert!(commutes(h1, ok_b, 1e-9).is_err());
    }

    #[test]
    fn non_commuting_context_fails() {
        let obs = fr_observables::<f64>();
        assert!(matches!(
            Context::new("AX", vec![obs.a.clone(), obs.x.clone()]),
            Err(Error::NonCommuting { .. })
        ));
        assert!(matches!(
            Context::<f64>::new("none", vec![]),
            Err(Error::EmptyContext(_))
        ));
        assert!(Context::new("AA", vec![obs.a.clone(), obs.a.clone()]).is_err());
    }

    #[test]
    fn fr_support_rows() {
        let t = fr_table();
        assert_eq!(rendered(t.row("AB").unwrap()), ["h,0", "t,0", "t,1"]);
        assert_eq!(rendered(t.row("XB").unwrap()), ["ok,1", "fail,0", "fail,1"]);
        assert_eq!(rendered(t.row("AY").unwrap()), ["h,ok", "h,fail", "t,fail"]);
        assert_eq!(rendered(t.row("XY").unwrap()).len(), 4);
        let ids: Vec<&str> = t.observables().iter().map(|o| o.id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "X", "Y"]);
    }

    #[test]
    fn support_rows_stable_across_tolerances() {
        let a = build_support_table(&fr_state(), &fr_contexts(), 1e-9).unwrap();
        let b = build_support_table(&fr_state(), &fr_contexts(), 1e-6).unwrap();
        for (x, y) in a.rows().iter().zip(b.rows()) {
            assert_eq!(x.support, y.support);
        }
    }

    #[test]
    fn enumeration_on_fr_table() {
        let t = fr_table();
        let none = global_assignments(&t, &ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]))
            .unwrap();
        assert!(none.is_empty());
        let all = global_assignments(&t, &ValueAssignment::new()).unwrap();
        assert!(all.contains(&ValueAssignment::from_pairs([
            ("A", "t"),
            ("B", "0"),
            ("X", "fail"),
            ("Y", "fail")
        ])));
        assert!(
            global_assignments(&t, &ValueAssignment::from_pairs([("A", "h"), ("B", "1")]))
                .unwrap()
                .is_empty()
        );
        let mut sorted = all.clone();
        sorted.sort();
        // labels are declared h<t, 0<1 but ok before fail, so compare by label index instead
        assert_eq!(all.len(), sorted.len());
    }

    #[test]
    fn enumeration_rejects_unknown_constraints() {
        let t = fr_table();
        assert!(matches!(
            global_assignments(&t, &ValueAssignment::from_pairs([("Z", "ok")])),
            Err(Error::UnknownObservable(_))
        ));
        assert!(matches!(
            global_assignments(&t, &ValueAssignment::from_pairs([("X", "maybe")])),
            Err(Error::UnknownOutcome { .. })
        ));
    }

    #[test]
    fn fr_certificate_chain() {
        let t = fr_table();
        let cert = hardy_certificate(&t, &ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]))
            .unwrap()
            .expect("contradiction");
        let summary: Vec<(String, Vec<String>, String)> = cert
            .steps
            .iter()
            .map(|s| {
                (
                    s.context.clone(),
                    s.excluded.iter().map(ToString::to_string).collect(),
                    format!("{}={}", s.observable, s.value),
                )
            })
            .collect();
        assert_eq!(
            summary,
            [
                (
                    "XB".to_string(),
                    vec!["ok,0".to_string()],
                    "B=1".to_string()
                ),
                (
                    "AY".to_string(),
                    vec!["t,ok".to_string()],
                    "A=h".to_string()
                ),
            ]
        );
        assert_eq!(
            cert.violated,
            Some(Violation {
                context: "AB".into(),
                outcome: "h,1".into()
            })
        );
        cert.replay(&t).unwrap();
    }

    #[test]
    fn consistent_premise_has_no_certificate() {
        let t = fr_table();
        let premise = ValueAssignment::from_pairs([("A", "h"), ("B", "0")]);
        assert!(!global_assignments(&t, &premise).unwrap().is_empty());
        assert!(hardy_certificate(&t, &premise).unwrap().is_none());
    }

    #[test]
    fn immediate_violation_has_zero_steps() {
        let t = fr_table();
        let cert = hardy_certificate(&t, &ValueAssignment::from_pairs([("A", "h"), ("B", "1")]))
            .unwrap()
            .unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(
            cert.violated.as_ref().unwrap().outcome,
            Outcome::parse("h,1")
        );
        cert.replay(&t).unwrap();
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let t = fr_table();
        let mut cert =
            hardy_certificate(&t, &ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]))
                .unwrap()
                .unwrap();
        cert.steps[0].value = "0".into();
        assert!(cert.replay(&t).is_err());
        let mut cert2 =
            hardy_certificate(&t, &ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]))
                .unwrap()
                .unwrap();
        cert2.violated = Some(Violation {
            context: "AB".into(),
            outcome: "t,1".into(),
        });
        assert!(cert2.replay(&t).is_err());
    }

    /// Odd cycle of anti-correlated binary observables: no global assignment
    /// exists, yet every free observable keeps two options in every context.
    fn odd_cycle_table() -> SupportTable<f64> {
        let obs = ["P", "Q", "R"];
        let rows = (0..3)
            .map(|i| {
                let pair = vec![obs[i].to_string(), obs[(i + 1) % 3].to_string()];
                let support = vec![Outcome::parse("0,1"), Outcome::parse("1,0")];
                let distribution = OutcomeDistribution::new(
                    ["0,0", "0,1", "1,0", "1,1"]
                        .iter()
                        .map(|o| {
                            let o = Outcome::parse(o);
                            let p = if support.contains(&o) { 0.5 } else { 0.0 };
                            (o, p)
                        })
                        .collect(),
                )
                .unwrap();
                SupportRow {
                    context: pair.concat(),
                    observables: pair,
                    distribution,
                    support,
                }
            })
            .collect();
        SupportTable {
            state: StateVector::basis(2, 0).unwrap(),
            tol: 1e-9,
            observables: obs
                .iter()
                .map(|o| ObservableInfo {
                    id: o.to_string(),
                    labels: vec!["0".into(), "1".into()],
                })
                .collect(),
            rows,
        }
    }

    #[test]
    fn stalled_propagation_falls_back_to_enumeration() {
        let table = odd_cycle_table();
        assert!(global_assignments(&table, &ValueAssignment::new())
            .unwrap()
            .is_empty());
        let cert = hardy_certificate(&table, &ValueAssignment::new())
            .unwrap()
            .unwrap();
        assert!(cert.steps.is_empty());
        assert!(cert.violated.is_none());
        assert_eq!(cert.assignments_checked, 8);
        cert.replay(&table).unwrap();

        // with one value fixed, propagation runs around the cycle to a violation
        let cert = hardy_certificate(&table, &ValueAssignment::from_pairs([("P", "0")]))
            .unwrap()
            .unwrap();
        assert_eq!(cert.steps.len(), 2);
        assert!(cert.violated.is_some());
        cert.replay(&table).unwrap();
    }

    #[test]
    fn fr_contexts_are_intertwined() {
        let w = intertwinement(&fr_contexts::<f64>());
        assert!(w.is_intertwined());
        assert_eq!(w.total_observables, 4);
        assert_eq!(w.largest_context, 2);
        let mut per_obs: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, _, o) in &w.shared {
            *per_obs.entry(o.as_str()).or_default() += 1;
        }
        assert_eq!(per_obs.len(), 4);
        assert!(per_obs.values().all(|&n| n == 1));
    }
}
