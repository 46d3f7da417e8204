//! Projective measurements and the Born rule.
//!
//! A [`Pvm`] pairs outcome labels with mutually orthogonal projectors that sum
//! to the identity. Joint measurements of commuting PVMs carry tuple-valued
//! outcomes; an [`Outcome`] is therefore always a tuple, of length one for a
//! plain observable.

use std::fmt;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    inner_raw, norm_sqr, projector_from, tensor_operator, Factorization, Operator, StateVector,
};
use crate::scalar::Real;

/// Outcome tuple, one label per component observable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Outcome(Vec<String>);

impl Outcome {
    pub fn new<I, S>(labels: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Outcome(labels.into_iter().map(Into::into).collect())
    }

    pub fn single(label: impl Into<String>) -> Self {
        Outcome(vec![label.into()])
    }

    /// Parses the comma-separated display form, e.g. `"ok,1"`.
    pub fn parse(s: &str) -> Self {
        Outcome::new(s.split(',').map(str::trim))
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Outcome) -> Outcome {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Outcome(v)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(","))
    }
}

impl From<&str> for Outcome {
    fn from(s: &str) -> Self {
        Outcome::parse(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PvmElement<T> {
    pub outcome: Outcome,
    pub projector: Operator<T>,
}

/// Labelled projective measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pvm<T> {
    id: String,
    observables: Vec<String>,
    elements: Vec<PvmElement<T>>,
}

impl<T: Real> Pvm<T> {
    /// Validates that every element is a projector, that elements are pairwise
    /// orthogonal and that they sum to the identity.
    pub fn new(
        id: impl Into<String>,
        observables: Vec<String>,
        elements: Vec<PvmElement<T>>,
    ) -> Result<Self> {
        let id = id.into();
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidArgument(format!("PVM {id} has no outcomes")))?;
        let dim = first.projector.dim();
        let tol = T::structural_tol();
        let mut sum = Operator::zeros(dim);
        for (i, e) in elements.iter().enumerate() {
            if e.outcome.len() != observables.len() {
                return Err(Error::InvalidArgument(format!(
                    "outcome {} of {id} has {} labels for {} observables",
                    e.outcome,
                    e.outcome.len(),
                    observables.len()
                )));
            }
            if elements[..i].iter().any(|o| o.outcome == e.outcome) {
                return Err(Error::DuplicateLabel {
                    observable: id.clone(),
                    label: e.outcome.to_string(),
                });
            }
            if e.projector.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.projector.dim(),
                });
            }
            if !e.projector.is_projector() {
                return Err(Error::InvalidArgument(format!(
                    "element {} of {id} is not a projector",
                    e.outcome
                )));
            }
            for o in &elements[..i] {
                if o.projector.matmul(&e.projector)?.max_abs() > tol {
                    return Err(Error::NotOrthogonal {
                        first: o.outcome.to_string(),
                        second: e.outcome.to_string(),
                        overlap: o.projector.matmul(&e.projector)?.max_abs().to_f64_lossy(),
                    });
                }
            }
            sum = sum.add(&e.projector)?;
        }
        if sum.max_abs_diff(&Operator::identity(dim)) > tol {
            return Err(Error::IncompleteBasis {
                observable: id,
                found: elements.len(),
                dim,
            });
        }
        Ok(Self {
            id,
            observables,
            elements,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Component observable ids, one per position in each outcome tuple.
    pub fn observables(&self) -> &[String] {
        &self.observables
    }

    pub fn elements(&self) -> &[PvmElement<T>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].projector.dim()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &Outcome> {
        self.elements.iter().map(|e| &e.outcome)
    }

    pub fn projector(&self, outcome: &Outcome) -> Result<&Operator<T>> {
        self.elements
            .iter()
            .find(|e| &e.outcome == outcome)
            .map(|e| &e.projector)
            .ok_or_else(|| Error::UnknownOutcome {
                observable: self.id.clone(),
                outcome: outcome.to_string(),
            })
    }

    /// Labels of a single-observable PVM, in declaration order.
    pub fn labels(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|e| e.outcome.labels().join(","))
            .collect()
    }
}

/// PVM built from an orthonormal basis, one rank-one projector per vector.
pub fn pvm_from_basis<T: Real>(
    observable_id: &str,
    basis: &[(String, StateVector<T>)],
) -> Result<Pvm<T>> {
    let dim = basis
        .first()
        .map(|(_, v)| v.dim())
        .ok_or_else(|| Error::IncompleteBasis {
            observable: observable_id.to_string(),
            found: 0,
            dim: 0,
        })?;
    let tol = T::structural_tol();
    for (i, (label, v)) in basis.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        let n = norm_sqr(v.amplitudes());
        if (n - T::one()).abs() > tol {
            return Err(Error::BasisNotNormalized {
                label: label.clone(),
                norm_sqr: n.to_f64_lossy(),
            });
        }
        for (other, w) in &basis[..i] {
            if other == label {
                return Err(Error::DuplicateLabel {
                    observable: observable_id.to_string(),
                    label: label.clone(),
                });
            }
            let overlap = inner_raw(w.amplitudes(), v.amplitudes())?.norm();
            if overlap > tol {
                return Err(Error::NotOrthogonal {
                    first: other.clone(),
                    second: label.clone(),
                    overlap: overlap.to_f64_lossy(),
                });
            }
        }
    }
    if basis.len() != dim {
        return Err(Error::IncompleteBasis {
            observable: observable_id.to_string(),
            found: basis.len(),
            dim,
        });
    }
    let elements = basis
        .iter()
        .map(|(label, v)| PvmElement {
            outcome: Outcome::single(label.clone()),
            projector: projector_from(v),
        })
        .collect();
    Pvm::new(observable_id, vec![observable_id.to_string()], elements)
}

/// Embeds a single-factor PVM into a composite space, acting as the identity
/// on every other factor.
pub fn lift<T: Real>(pvm: &Pvm<T>, factorization: &Factorization, slot: usize) -> Result<Pvm<T>> {
    let dims = factorization.dims();
    if slot >= dims.len() {
        return Err(Error::BadSlot {
            slot,
            factors: dims.len(),
        });
    }
    if pvm.dim() != dims[slot] {
        return Err(Error::DimensionMismatch {
            expected: dims[slot],
            found: pvm.dim(),
        });
    }
    let left = Operator::identity(dims[..slot].iter().product());
    let right = Operator::identity(dims[slot + 1..].iter().product());
    let elements = pvm
        .elements
        .iter()
        .map(|e| PvmElement {
            outcome: e.outcome.clone(),
            projector: tensor_operator(&tensor_operator(&left, &e.projector), &right),
        })
        .collect();
    Ok(Pvm {
        id: pvm.id.clone(),
        observables: pvm.observables.clone(),
        elements,
    })
}

/// Joint measurement of two commuting PVMs. Outcomes are concatenated tuples
/// in `p`-major order; projectors that multiply to zero are kept.
pub fn join<T: Real>(p: &Pvm<T>, q: &Pvm<T>) -> Result<Pvm<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    let mut elements = Vec::with_capacity(p.elements.len() * q.elements.len());
    for a in &p.elements {
        for b in &q.elements {
            if !a
                .projector
                .commutes_with(&b.projector, T::structural_tol())?
            {
                return Err(Error::NonCommuting {
                    first: format!("{}={}", p.id, a.outcome),
                    second: format!("{}={}", q.id, b.outcome),
                });
            }
            elements.push(PvmElement {
                outcome: a.outcome.concat(&b.outcome),
                projector: a.projector.matmul(&b.projector)?,
            });
        }
    }
    let mut observables = p.observables.clone();
    observables.extend(q.observables.iter().cloned());
    Pvm::new(format!("{}{}", p.id, q.id), observables, elements)
}

impl<T: Real> Operator<T> {
    /// `‖PQ − QP‖_max ≤ tol`.
    pub fn commutes_with(&self, other: &Operator<T>, tol: T) -> Result<bool> {
        let pq = self.matmul(other)?;
        let qp = other.matmul(self)?;
        Ok(pq.max_abs_diff(&qp) <= tol)
    }
}

/// Probabilities over the outcomes of one PVM, in the PVM's declared order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution<T> {
    entries: Vec<(Outcome, T)>,
}

impl<T: Real> OutcomeDistribution<T> {
    /// Clamps probabilities within the clamp tolerance below zero and checks the total.
    pub fn new(entries: Vec<(Outcome, T)>) -> Result<Self> {
        let mut total = T::zero();
        let mut out = Vec::with_capacity(entries.len());
        for (o, p) in entries {
            if !p.is_finite() || p < -T::clamp_tol() {
                return Err(Error::InvalidArgument(format!(
                    "probability {p} for {o} out of range"
                )));
            }
            let p = p.max(T::zero());
            total = total + p;
            out.push((o, p));
        }
        if (total - T::one()).abs() > T::structural_tol() {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { entries: out })
    }

    pub fn entries(&self) -> &[(Outcome, T)] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Outcome, T)> {
        self.entries.iter().map(|(o, p)| (o, *p))
    }

    /// Zero for outcomes the distribution does not list.
    pub fn probability(&self, outcome: &Outcome) -> T {
        self.entries
            .iter()
            .find(|(o, _)| o == outcome)
            .map_or(T::zero(), |(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> T {
        self.entries.iter().fold(T::zero(), |acc, (_, p)| acc + *p)
    }
}

/// Born-rule distribution `p(i) = ⟨ψ|Pᵢ|ψ⟩`.
pub fn born<T: Real>(pvm: &Pvm<T>, state: &StateVector<T>) -> Result<OutcomeDistribution<T>> {
    let entries = pvm
        .elements
        .iter()
        .map(|e| {
            let p = e.projector.expectation(state.amplitudes())?.re;
            Ok((e.outcome.clone(), p))
        })
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(entries)
}

/// Lüders rule: `Pᵢ|ψ⟩ / ‖Pᵢ|ψ⟩‖`. Conditioning on an outcome of probability
/// at most the clamp tolerance is an error.
pub fn conditionalize<T: Real>(
    pvm: &Pvm<T>,
    outcome: &Outcome,
    state: &StateVector<T>,
) -> Result<StateVector<T>> {
    let projected = pvm.projector(outcome)?.apply_raw(state.amplitudes())?;
    let p = norm_sqr(&projected);
    if p <= T::clamp_tol() {
        return Err(Error::ImpossibleEvent {
            outcome: outcome.to_string(),
            probability: p.to_f64_lossy(),
        });
    }
    let n = p.sqrt();
    let amps: Vec<Complex<T>> = projected.into_iter().map(|z| z / n).collect();
    StateVector::new(amps, state.factorization().clone())
}

/// Outcomes with Born probability strictly above `tol`, in declared order.
pub fn support<T: Real>(pvm: &Pvm<T>, state: &StateVector<T>, tol: T) -> Result<Vec<Outcome>> {
    if !(tol > T::zero() && tol < T::one()) {
        return Err(Error::InvalidArgument(format!(
            "support tolerance {tol} outside (0, 1)"
        )));
    }
    Ok(born(pvm, state)?
        .entries
        .into_iter()
        .filter(|(_, p)| *p > tol)
        .map(|(o, _)| o)
        .collect())
}

/// Seed for [`sample`]. Equal seeds give equal sample sequences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RandomSeed(pub u64);

impl From<u64> for RandomSeed {
    fn from(seed: u64) -> Self {
        RandomSeed(seed)
    }
}

impl RandomSeed {
    /// The generator behind every seeded routine in this crate: ChaCha with 8
    /// rounds, keyed through `SeedableRng::seed_from_u64`.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Inverse-CDF sampling over a distribution's declared order, driven by
/// uniform `f64` draws in `[0, 1)` from `rng`. An outcome is selected when the
/// draw is strictly below its cumulative probability, so zero-probability
/// outcomes are never drawn.
pub fn sample_indices<T: Real, R: Rng>(
    dist: &OutcomeDistribution<T>,
    n: usize,
    rng: &mut R,
) -> Vec<usize> {
    let mut cumulative = Vec::with_capacity(dist.len());
    let mut acc = 0.0;
    for (_, p) in dist.iter() {
        acc += p.to_f64_lossy();
        cumulative.push(acc);
    }
    // rounding can leave the total a hair below a draw; fall back to the last possible outcome
    let last_possible = dist
        .entries
        .iter()
        .rposition(|(_, p)| *p > T::zero())
        .unwrap_or(0);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            cumulative
                .iter()
                .position(|&c| u < c)
                .unwrap_or(last_possible)
        })
        .collect()
}

/// `n` i.i.d. draws from the Born distribution of `pvm` in `state`.
///
/// Uses [`RandomSeed::rng`] and [`sample_indices`].
pub fn sample<T: Real>(
    pvm: &Pvm<T>,
    state: &StateVector<T>,
    n: usize,
    seed: RandomSeed,
) -> Result<Vec<Outcome>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "sample count must be at least 1".into(),
        ));
    }
    let dist = born(pvm, state)?;
    let mut rng = seed.rng();
    Ok(sample_indices(&dist, n, &mut rng)
        .into_iter()
        .map(|i| dist.entries[i].0.clone())
        .collect())
}
