//! Built-in experiments.
//!
//! The Wigner's-friend protocol lives on two effective lab qubits `S_A ⊗ S_B`
//! with computational bases `{h, t}` and `{0, 1}`. The super-observables `X`
//! and `Y` measure in the rotated bases `ok = (first − second)/√2`,
//! `fail = (first + second)/√2` on each lab.
//!
//! The CHSH helpers measure binary observables `cos θ·Z + sin θ·X` on each
//! qubit, one angle per setting.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{
    build_support_table, hardy_certificate, Context, ContradictionCertificate, SupportTable,
    ValueAssignment,
};
use crate::hilbert::{tensor_state, Factorization, Operator, StateVector};
use crate::measurement::{
    born, conditionalize, join, lift, pvm_from_basis, sample, Outcome, OutcomeDistribution, Pvm,
    RandomSeed,
};
use crate::optimize::{compass_maximize, CompassOptions};
use crate::scalar::{c, Real};

pub fn fr_factorization() -> Factorization {
    Factorization::new(vec![2, 2], vec!["S_A", "S_B"]).expect("two qubit factors")
}

fn qubit<T: Real>(a: T, b: T) -> StateVector<T> {
    StateVector::from_real(&[a, b]).expect("normalized literal")
}

/// The four lab observables, both on their own factor and lifted to `S_A ⊗ S_B`.
#[derive(Clone, Debug)]
pub struct FrObservables<T> {
    pub a_local: Pvm<T>,
    pub b_local: Pvm<T>,
    pub x_local: Pvm<T>,
    pub y_local: Pvm<T>,
    pub a: Pvm<T>,
    pub b: Pvm<T>,
    pub x: Pvm<T>,
    pub y: Pvm<T>,
}

pub fn fr_observables<T: Real>() -> FrObservables<T> {
    let r = T::FRAC_1_SQRT_2();
    let (one, zero) = (T::one(), T::zero());
    let basis = |id: &str, first: (&str, StateVector<T>), second: (&str, StateVector<T>)| {
        pvm_from_basis(
            id,
            &[
                (first.0.to_string(), first.1),
                (second.0.to_string(), second.1),
            ],
        )
        .expect("orthonormal qubit basis")
    };
    let a_local = basis("A", ("h", qubit(one, zero)), ("t", qubit(zero, one)));
    let b_local = basis("B", ("0", qubit(one, zero)), ("1", qubit(zero, one)));
    let x_local = basis("X", ("ok", qubit(r, -r)), ("fail", qubit(r, r)));
    let y_local = basis("Y", ("ok", qubit(r, -r)), ("fail", qubit(r, r)));
    let f = fr_factorization();
    let lifted = |p: &Pvm<T>, slot| lift(p, &f, slot).expect("qubit slot");
    FrObservables {
        a: lifted(&a_local, 0),
        b: lifted(&b_local, 1),
        x: lifted(&x_local, 0),
        y: lifted(&y_local, 1),
        a_local,
        b_local,
        x_local,
        y_local,
    }
}

/// `(|h0⟩ + |t0⟩ + |t1⟩)/√3` over the basis order `(h0, h1, t0, t1)`.
pub fn fr_state<T: Real>() -> StateVector<T> {
    let s = T::one() / T::lit(3.0).sqrt();
    let z = T::zero();
    let amps = vec![c(s, z), c(z, z), c(s, z), c(s, z)];
    StateVector::new(amps, fr_factorization()).expect("normalized")
}

/// The same state built from the preparation: a biased coin
/// `√(1/3)|h⟩ + √(2/3)|t⟩` controls whether the qubit is sent as `|0⟩` or
/// `(|0⟩ + |1⟩)/√2`.
pub fn fr_protocol_state<T: Real>() -> StateVector<T> {
    let (one, zero) = (T::one(), T::zero());
    let heads_weight = (one / T::lit(3.0)).sqrt();
    let tails_weight = (T::lit(2.0) / T::lit(3.0)).sqrt();
    let r = T::FRAC_1_SQRT_2();
    let heads_branch = tensor_state(&qubit(one, zero), &qubit(one, zero));
    let tails_branch = tensor_state(&qubit(zero, one), &qubit(r, r));
    let amps = heads_branch
        .amplitudes()
        .iter()
        .zip(tails_branch.amplitudes())
        .map(|(h, t)| *h * heads_weight + *t * tails_weight)
        .collect();
    StateVector::new(amps, fr_factorization()).expect("isometry preserves norm")
}

/// Contexts in the order the argument uses them: `XY`, `XB`, `AY`, `AB`.
pub fn fr_contexts<T: Real>() -> Vec<Context<T>> {
    let o = fr_observables::<T>();
    let ctx = |id: &str, p: &Pvm<T>, q: &Pvm<T>| {
        Context::new(id, vec![p.clone(), q.clone()]).expect("commuting lab observables")
    };
    vec![
        ctx("XY", &o.x, &o.y),
        ctx("XB", &o.x, &o.b),
        ctx("AY", &o.a, &o.y),
        ctx("AB", &o.a, &o.b),
    ]
}

pub fn fr_support_table<T: Real>(tol: T) -> Result<SupportTable<T>> {
    build_support_table(&fr_state(), &fr_contexts(), tol)
}

/// Who the ultimate observers are.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrMode {
    /// Only Wigner and Friend register outcomes; the labs stay entangled.
    Unitary,
    /// Alice and Bob register outcomes first; the state is conditioned on them.
    Collapse,
}

impl fmt::Display for FrMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrMode::Unitary => "unitary",
            FrMode::Collapse => "collapse",
        })
    }
}

impl std::str::FromStr for FrMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unitary" => Ok(FrMode::Unitary),
            "collapse" => Ok(FrMode::Collapse),
            other => Err(Error::InvalidArgument(format!("unknown mode {other}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrReport<T> {
    pub mode: FrMode,
    /// Present iff `mode` is [`FrMode::Collapse`].
    pub alice_bob_outcome: Option<Outcome>,
    /// State the super-observers measure.
    pub pre_super_state: StateVector<T>,
    /// Born distribution of the joint `X, Y` measurement.
    pub super_distribution: OutcomeDistribution<T>,
    pub p_ok_ok: T,
    /// Present iff `mode` is [`FrMode::Unitary`].
    pub certificate: Option<ContradictionCertificate>,
}

fn ok_ok() -> Outcome {
    Outcome::new(["ok", "ok"])
}

pub fn run_fr<T: Real>(mode: FrMode, seed: RandomSeed) -> Result<FrReport<T>> {
    match mode {
        FrMode::Unitary => {
            let obs = fr_observables::<T>();
            let state = fr_state::<T>();
            let dist = born(&join(&obs.x, &obs.y)?, &state)?;
            let table = fr_support_table(T::support_tol())?;
            let premise = ValueAssignment::from_pairs([("X", "ok"), ("Y", "ok")]);
            let certificate = hardy_certificate(&table, &premise)?;
            Ok(FrReport {
                mode,
                alice_bob_outcome: None,
                p_ok_ok: dist.probability(&ok_ok()),
                pre_super_state: state,
                super_distribution: dist,
                certificate,
            })
        }
        FrMode::Collapse => {
            let obs = fr_observables::<T>();
            let branch = sample(&join(&obs.a, &obs.b)?, &fr_state(), 1, seed)?
                .pop()
                .expect("one draw");
            fr_collapse_branch(&branch)
        }
    }
}

/// Collapse-mode report for a fixed Alice/Bob outcome, e.g. `"t,1"`.
pub fn fr_collapse_branch<T: Real>(branch: &Outcome) -> Result<FrReport<T>> {
    let obs = fr_observables::<T>();
    let state = conditionalize(&join(&obs.a, &obs.b)?, branch, &fr_state())?;
    let dist = born(&join(&obs.x, &obs.y)?, &state)?;
    Ok(FrReport {
        mode: FrMode::Collapse,
        alice_bob_outcome: Some(branch.clone()),
        p_ok_ok: dist.probability(&ok_ok()),
        pre_super_state: state,
        super_distribution: dist,
        certificate: None,
    })
}

/// Whether `state` is an eigenstate of the joint `A, B` measurement.
pub fn ab_definite<T: Real>(state: &StateVector<T>) -> Result<bool> {
    let obs = fr_observables::<T>();
    let dist = born(&join(&obs.a, &obs.b)?, state)?;
    let definite = dist
        .iter()
        .any(|(_, p)| p >= T::one() - T::structural_tol());
    Ok(definite)
}

/// Measurement angles `(a, a′)` for the first qubit and `(b, b′)` for the second,
/// stored modulo 2π.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSetting<T> {
    pub a: T,
    pub a_prime: T,
    pub b: T,
    pub b_prime: T,
}

fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let r = x - (x / tau).floor() * tau;
    if r >= tau || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

impl<T: Real> ChshSetting<T> {
    pub fn new(a: T, a_prime: T, b: T, b_prime: T) -> Result<Self> {
        if ![a, a_prime, b, b_prime].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidArgument("CHSH angles must be finite".into()));
        }
        Ok(Self {
            a: wrap_angle(a),
            a_prime: wrap_angle(a_prime),
            b: wrap_angle(b),
            b_prime: wrap_angle(b_prime),
        })
    }

    pub fn angles(&self) -> [T; 4] {
        [self.a, self.a_prime, self.b, self.b_prime]
    }
}

/// Binary PVM with outcomes `+1`, `-1` for `cos θ·Z + sin θ·X`.
pub fn binary_pvm<T: Real>(id: &str, theta: T) -> Result<Pvm<T>> {
    let half = theta / T::lit(2.0);
    let (s, cs) = half.sin_cos();
    let plus = StateVector::from_real(&[cs, s])?;
    let minus = StateVector::from_real(&[-s, cs])?;
    pvm_from_basis(id, &[("+1".into(), plus), ("-1".into(), minus)])
}

fn sign_of(label: &str) -> i32 {
    if label == "+1" {
        1
    } else {
        -1
    }
}

fn check_two_qubits<T: Real>(state: &StateVector<T>) -> Result<()> {
    if state.factorization().dims() != [2, 2] {
        return Err(Error::InvalidArgument(format!(
            "CHSH needs a [2, 2] factorization, got {:?}",
            state.factorization().dims()
        )));
    }
    Ok(())
}

/// `E(α, β)`: expected product of the ±1 outcomes, from the Born distribution
/// of the joint measurement.
pub fn correlation<T: Real>(state: &StateVector<T>, alpha: T, beta: T) -> Result<T> {
    check_two_qubits(state)?;
    let f = state.factorization();
    let p = lift(&binary_pvm("a", alpha)?, f, 0)?;
    let q = lift(&binary_pvm("b", beta)?, f, 1)?;
    let dist = born(&join(&p, &q)?, state)?;
    Ok(dist.iter().fold(T::zero(), |acc, (o, prob)| {
        let l = o.labels();
        let sign = sign_of(&l[0]) * sign_of(&l[1]);
        acc + T::lit(f64::from(sign)) * prob
    }))
}

/// `S = E(a,b) + E(a,b′) + E(a′,b) − E(a′,b′)`.
pub fn chsh_value<T: Real>(state: &StateVector<T>, setting: &ChshSetting<T>) -> Result<T> {
    let e = |x, y| correlation(state, x, y);
    Ok(
        e(setting.a, setting.b)? + e(setting.a, setting.b_prime)? + e(setting.a_prime, setting.b)?
            - e(setting.a_prime, setting.b_prime)?,
    )
}

/// Fast evaluator for the same `S`, via `⟨ψ|O_α ⊗ O_β|ψ⟩` with
/// `O_θ = cos θ·Z + sin θ·X` applied directly to the amplitudes.
struct ChshObjective<T> {
    amps: Vec<Complex<T>>,
}

impl<T: Real> ChshObjective<T> {
    fn correlation(&self, alpha: T, beta: T) -> T {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        let op = |s: T, cs: T| [[cs, s], [s, -cs]];
        let (oa, ob) = (op(sa, ca), op(sb, cb));
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, row_a) in oa.iter().enumerate() {
            for (j, row_b) in ob.iter().enumerate() {
                let bra = self.amps[2 * i + j].conj();
                for (k, &wa) in row_a.iter().enumerate() {
                    for (l, &wb) in row_b.iter().enumerate() {
                        let w = wa * wb;
                        if w != T::zero() {
                            acc = acc + bra * self.amps[2 * k + l] * w;
                        }
                    }
                }
            }
        }
        acc.re
    }

    fn value(&self, x: &[T]) -> T {
        self.correlation(x[0], x[2]) + self.correlation(x[0], x[3]) + self.correlation(x[1], x[2])
            - self.correlation(x[1], x[3])
    }
}

/// Best CHSH value found by compass search from `restarts` seeded random
/// starts; ties go to the earliest restart. The reported value is
/// [`chsh_value`] at the returned (wrapped) setting.
pub fn maximize_chsh<T: Real>(
    state: &StateVector<T>,
    restarts: usize,
    seed: RandomSeed,
) -> Result<(ChshSetting<T>, T)> {
    check_two_qubits(state)?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    use rand::Rng;
    let objective = ChshObjective {
        amps: state.amplitudes().to_vec(),
    };
    let options = CompassOptions::<T>::default();
    let mut rng = seed.rng();
    let mut best: Option<(ChshSetting<T>, T)> = None;
    for _ in 0..restarts {
        let start: Vec<T> = (0..4)
            .map(|_| T::lit(rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect();
        let found = compass_maximize(|x| objective.value(x), start, &options);
        let p = &found.point;
        let setting = ChshSetting::new(p[0], p[1], p[2], p[3])?;
        let value = chsh_value(state, &setting)?;
        if best.as_ref().is_none_or(|(_, v)| value > *v) {
            best = Some((setting, value));
        }
    }
    Ok(best.expect("at least one restart"))
}

/// `S` for a deterministic local strategy with fixed ±1 answers.
pub fn deterministic_chsh(a: i32, a_prime: i32, b: i32, b_prime: i32) -> i32 {
    a * b + a * b_prime + a_prime * b - a_prime * b_prime
}

/// Maximum of `S` over all 16 deterministic ±1 strategies.
pub fn classical_chsh_bound<T: Real>() -> T {
    let signs = [1, -1];
    let mut best = i32::MIN;
    for a in signs {
        for ap in signs {
            for b in signs {
                for bp in signs {
                    best = best.max(deterministic_chsh(a, ap, b, bp));
                }
            }
        }
    }
    T::lit(f64::from(best))
}

/// `2√2`.
pub fn tsirelson_bound<T: Real>() -> T {
    T::lit(2.0) * T::SQRT_2()
}

fn two_qubit<T: Real>(amps: [T; 4]) -> StateVector<T> {
    let f = Factorization::new(vec![2, 2], vec!["A", "B"]).expect("two qubits");
    let amps = amps.iter().map(|&x| c(x, T::zero())).collect();
    StateVector::new(amps, f).expect("normalized")
}

/// `(|01⟩ − |10⟩)/√2`.
pub fn singlet<T: Real>() -> StateVector<T> {
    let r = T::FRAC_1_SQRT_2();
    let z = T::zero();
    two_qubit([z, r, -r, z])
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_phi_plus<T: Real>() -> StateVector<T> {
    let r = T::FRAC_1_SQRT_2();
    let z = T::zero();
    two_qubit([r, z, z, r])
}

/// `|00⟩`.
pub fn product_zero_zero<T: Real>() -> StateVector<T> {
    let (o, z) = (T::one(), T::zero());
    two_qubit([o, z, z, z])
}

/// Operator `cos θ·Z + sin θ·X`, exposed for cross-checks.
pub fn binary_observable<T: Real>(theta: T) -> Operator<T> {
    let (s, cs) = theta.sin_cos();
    Operator::from_real_rows(&[vec![cs, s], vec![s, -cs]]).expect("2x2")
}
