//! Expected values checked against independent computations that share no
//! code path with the library routines under test.

use std::f64::consts::PI;

use qframes::frames::{global_assignments, hardy_certificate};
use qframes::measurement::{born, join, sample};
use qframes::scenarios::{
    fr_observables, fr_state, fr_support_table, maximize_chsh, product_zero_zero, singlet,
};
use qframes::{Outcome, RandomSeed, ValueAssignment};

const SQRT3_INV: f64 = 0.577_350_269_189_625_8;

/// Amplitudes of the FR state over (h0, h1, t0, t1), written out by hand.
const PSI: [f64; 4] = [SQRT3_INV, 0.0, SQRT3_INV, SQRT3_INV];

/// Local basis vectors by label, in the lab's computational basis.
fn local(label: &str) -> [f64; 2] {
    let r = 0.5f64.sqrt();
    match label {
        "h" | "0" => [1.0, 0.0],
        "t" | "1" => [0.0, 1.0],
        "ok" => [r, -r],
        "fail" => [r, r],
        _ => unreachable!(),
    }
}

/// `|⟨u ⊗ v|ψ⟩|²` by direct summation.
fn pair_probability(u: &str, v: &str) -> f64 {
    let (u, v) = (local(u), local(v));
    let mut amp = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            amp += u[i] * v[j] * PSI[2 * i + j];
        }
    }
    amp * amp
}

/// Every (A, B, X, Y) assignment whose four pairs all have positive probability.
fn brute_force_assignments(premise: &[(&str, &str)]) -> Vec<[&'static str; 4]> {
    let mut out = Vec::new();
    for a in ["h", "t"] {
        for b in ["0", "1"] {
            for x in ["ok", "fail"] {
                for y in ["ok", "fail"] {
                    let vals = [a, b, x, y];
                    let fixed = premise.iter().all(|(k, v)| {
                        let idx = ["A", "B", "X", "Y"].iter().position(|o| o == k).unwrap();
                        vals[idx] == *v
                    });
                    let possible = [(a, b), (x, b), (a, y), (x, y)]
                        .iter()
                        .all(|(u, v)| pair_probability(u, v) > 1e-9);
                    if fixed && possible {
                        out.push(vals);
                    }
                }
            }
        }
    }
    out
}

fn as_assignment(vals: [&str; 4]) -> ValueAssignment {
    ValueAssignment::from_pairs(["A", "B", "X", "Y"].into_iter().zip(vals))
}

#[test]
fn context_distributions_match_direct_summation() {
    let obs = fr_observables::<f64>();
    let psi = fr_state::<f64>();
    let contexts = [
        (join(&obs.a, &obs.b).unwrap(), "AB"),
        (join(&obs.x, &obs.y).unwrap(), "XY"),
        (join(&obs.x, &obs.b).unwrap(), "XB"),
        (join(&obs.a, &obs.y).unwrap(), "AY"),
    ];
    for (pvm, _) in &contexts {
        for (o, p) in born(pvm, &psi).unwrap().iter() {
            let l = o.labels();
            assert!((p - pair_probability(&l[0], &l[1])).abs() < 1e-12, "{o}");
        }
    }
    // frozen from the oracle above
    assert!((pair_probability("ok", "ok") - 1.0 / 12.0).abs() < 1e-15);
    assert!((pair_probability("fail", "fail") - 0.75).abs() < 1e-15);
    assert!((pair_probability("fail", "0") - 2.0 / 3.0).abs() < 1e-15);
    assert!((pair_probability("t", "fail") - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn enumeration_matches_brute_force() {
    let table = fr_support_table(1e-9).unwrap();
    let premises: [&[(&str, &str)]; 6] = [
        &[],
        &[("X", "ok"), ("Y", "ok")],
        &[("A", "h"), ("B", "1")],
        &[("A", "h"), ("B", "0")],
        &[("X", "ok")],
        &[("Y", "fail")],
    ];
    for premise in premises {
        let oracle: Vec<ValueAssignment> = brute_force_assignments(premise)
            .into_iter()
            .map(as_assignment)
            .collect();
        let got = global_assignments(
            &table,
            &ValueAssignment::from_pairs(premise.iter().copied()),
        )
        .unwrap();
        let mut got_sorted = got.clone();
        got_sorted.sort();
        let mut oracle_sorted = oracle.clone();
        oracle_sorted.sort();
        assert_eq!(got_sorted, oracle_sorted, "premise {premise:?}");
        let cert = hardy_certificate(
            &table,
            &ValueAssignment::from_pairs(premise.iter().copied()),
        )
        .unwrap();
        assert_eq!(cert.is_some(), oracle.is_empty());
    }
    assert!(brute_force_assignments(&[]).contains(&["t", "0", "fail", "fail"]));
    assert!(brute_force_assignments(&[("X", "ok"), ("Y", "ok")]).is_empty());
}

/// `⟨ψ| P ⊗ O_β |ψ⟩` for `P ∈ {Z, X}` on the first qubit, real amplitudes.
fn local_correlations(psi: &[f64; 4], beta: f64) -> (f64, f64) {
    let (s, c) = beta.sin_cos();
    let ob = [[c, s], [s, -c]];
    let z = [[1.0, 0.0], [0.0, -1.0]];
    let x = [[0.0, 1.0], [1.0, 0.0]];
    let expect = |oa: [[f64; 2]; 2]| {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        acc += psi[2 * i + j] * oa[i][k] * ob[j][l] * psi[2 * k + l];
                    }
                }
            }
        }
        acc
    };
    (expect(z), expect(x))
}

/// Grid over Bob's two angles at 1° resolution. For fixed `b, b′` the best
/// Alice angle for `cos α·U + sin α·V` is `√(U² + V²)`, so the inner
/// maximization is exact.
fn grid_chsh_max(psi: &[f64; 4]) -> f64 {
    let step = PI / 180.0;
    let corr: Vec<(f64, f64)> = (0..360)
        .map(|k| local_correlations(psi, k as f64 * step))
        .collect();
    let mut best = f64::MIN;
    for (u1, v1) in &corr {
        for (u2, v2) in &corr {
            let s = (u1 + u2).hypot(v1 + v2) + (u1 - u2).hypot(v1 - v2);
            best = best.max(s);
        }
    }
    best
}

/// Pinned from the grid oracle and the matching closed form `2√13/3`.
const FR_CHSH_MAX: f64 = 2.403_700_850_309_326_2;

#[test]
fn chsh_maxima_against_grid_oracle() {
    let r = 0.5f64.sqrt();
    let singlet_amps = [0.0, r, -r, 0.0];
    let grid_singlet = grid_chsh_max(&singlet_amps);
    let grid_fr = grid_chsh_max(&PSI);
    let grid_product = grid_chsh_max(&[1.0, 0.0, 0.0, 0.0]);

    assert!((grid_singlet - 2.0 * 2f64.sqrt()).abs() < 1e-9);
    assert!(grid_fr <= FR_CHSH_MAX + 1e-12 && FR_CHSH_MAX - grid_fr < 1e-3);
    assert!((FR_CHSH_MAX - 2.0 * 13f64.sqrt() / 3.0).abs() < 1e-15);
    assert!((grid_product - 2.0).abs() < 1e-12);

    let (_, singlet_value) = maximize_chsh(&singlet::<f64>(), 20, RandomSeed(1)).unwrap();
    assert!((singlet_value - 2.0 * 2f64.sqrt()).abs() < 1e-6);
    let (_, fr_value) = maximize_chsh(&fr_state::<f64>(), 20, RandomSeed(1)).unwrap();
    assert!((fr_value - FR_CHSH_MAX).abs() < 1e-6, "{fr_value}");
    assert!(fr_value > 2.0 && fr_value <= 2.0 * 2f64.sqrt());
    let (_, product_value) = maximize_chsh(&product_zero_zero::<f64>(), 20, RandomSeed(1)).unwrap();
    assert!(product_value <= 2.0 + 1e-9);
}

#[test]
fn sampling_total_variation() {
    let obs = fr_observables::<f64>();
    let psi = fr_state::<f64>();
    let n = 90_000;
    for pvm in [join(&obs.a, &obs.b).unwrap(), join(&obs.x, &obs.y).unwrap()] {
        let draws = sample(&pvm, &psi, n, RandomSeed(2024)).unwrap();
        let mut tv = 0.0;
        for o in pvm.outcomes() {
            let l = o.labels();
            let f = draws.iter().filter(|d| *d == o).count() as f64 / n as f64;
            tv += (f - pair_probability(&l[0], &l[1])).abs();
        }
        assert!(tv / 2.0 < 0.02, "{tv}");
    }
    let zero = Outcome::new(["h", "1"]);
    let ab = join(&obs.a, &obs.b).unwrap();
    assert!(!sample(&ab, &psi, n, RandomSeed(9)).unwrap().contains(&zero));
}
