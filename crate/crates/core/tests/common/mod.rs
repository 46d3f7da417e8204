#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use qframes::hilbert::{Factorization, StateVector};

pub fn complex_vec(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_map(|v| {
            v.into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect()
        })
        .prop_filter("non-degenerate", |v: &Vec<Complex64>| {
            v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3
        })
}

pub fn state(dim: usize) -> impl Strategy<Value = StateVector<f64>> {
    complex_vec(dim)
        .prop_map(move |v| StateVector::normalize(v, Factorization::single(dim)).unwrap())
}

pub fn state_in(dims: Vec<usize>) -> impl Strategy<Value = StateVector<f64>> {
    let f = Factorization::from_dims(dims).unwrap();
    complex_vec(f.total_dim()).prop_map(move |v| StateVector::normalize(v, f.clone()).unwrap())
}

/// Gram-Schmidt over `dim` random vectors; `None` if they are too close to dependent.
pub fn orthonormalize(raw: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for v in raw {
        let mut w = v.clone();
        for u in &out {
            let proj: Complex64 = u.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
            for (wi, ui) in w.iter_mut().zip(u) {
                *wi -= proj * ui;
            }
        }
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n < 1e-3 {
            return None;
        }
        out.push(w.into_iter().map(|z| z / n).collect());
    }
    Some(out)
}

pub fn labelled_basis(dim: usize) -> impl Strategy<Value = Vec<(String, StateVector<f64>)>> {
    prop::collection::vec(complex_vec(dim), dim)
        .prop_filter_map("independent", |raw| orthonormalize(&raw))
        .prop_map(move |basis| {
            basis
                .into_iter()
                .enumerate()
                .map(|(i, v)| {
                    let s = StateVector::new(v, Factorization::single(dim)).unwrap();
                    (format!("o{i}"), s)
                })
                .collect()
        })
}
