//! Dense complex linear algebra on small tensor-factored Hilbert spaces.
//!
//! Basis ordering is fixed globally: the first factor varies slowest, so the
//! amplitude of `|i⟩ ⊗ |j⟩` sits at index `i * dim(b) + j`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{c, is_finite, max_part, Real};

/// Ordered factor dimensions of a composite space, with a name per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl Factorization {
    pub fn new<S: Into<String>>(dims: Vec<usize>, labels: Vec<S>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "factor dimensions must be positive, got {dims:?}"
            )));
        }
        if labels.len() != dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} factors",
                labels.len(),
                dims.len()
            )));
        }
        Ok(Self {
            dims,
            labels: labels.into_iter().map(Into::into).collect(),
        })
    }

    /// Factors labelled by position ("0", "1", ...).
    pub fn from_dims(dims: Vec<usize>) -> Result<Self> {
        let labels = (0..dims.len()).map(|i| i.to_string()).collect();
        Self::new(dims, labels)
    }

    /// A single unnamed factor.
    pub fn single(dim: usize) -> Self {
        Self::from_dims(vec![dim.max(1)]).expect("positive dimension")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Concatenation for a tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Factorization) -> Factorization {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Factorization { dims, labels }
    }
}

/// Squared Euclidean norm of a raw amplitude vector.
pub fn norm_sqr<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
}

/// Kronecker product of two raw vectors.
pub fn kron_vec<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(*x * *y);
        }
    }
    out
}

/// `⟨a|b⟩` on raw vectors, conjugate-linear in `a`.
pub fn inner_raw<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Complex<T>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * *y
        }))
}

/// A normalized pure state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector<T> {
    amplitudes: Vec<Complex<T>>,
    factorization: Factorization,
}

impl<T: Real> StateVector<T> {
    /// Checks finiteness, factorization and unit norm (within the structural tolerance).
    pub fn new(amplitudes: Vec<Complex<T>>, factorization: Factorization) -> Result<Self> {
        check_shape(&amplitudes, &factorization)?;
        let n = norm_sqr(&amplitudes);
        if (n - T::one()).abs() > T::structural_tol() {
            return Err(Error::NotNormalized {
                norm_sqr: n.to_f64_lossy(),
            });
        }
        Ok(Self {
            amplitudes,
            factorization,
        })
    }

    /// Rescales raw input to unit norm.
    pub fn normalize(amplitudes: Vec<Complex<T>>, factorization: Factorization) -> Result<Self> {
        check_shape(&amplitudes, &factorization)?;
        let n = norm_sqr(&amplitudes).sqrt();
        if n <= T::min_positive_value() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / n).collect();
        Ok(Self {
            amplitudes,
            factorization,
        })
    }

    /// Real amplitudes on a single factor of dimension `values.len()`.
    pub fn from_real(values: &[T]) -> Result<Self> {
        let amps = values.iter().map(|&x| c(x, T::zero())).collect();
        Self::new(amps, Factorization::single(values.len()))
    }

    /// Computational basis vector `|index⟩` on a single factor.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![c(T::zero(), T::zero()); dim];
        amps[index] = c(T::one(), T::zero());
        Self::new(amps, Factorization::single(dim))
    }

    /// Same amplitudes, different factor bookkeeping.
    pub fn with_factorization(self, factorization: Factorization) -> Result<Self> {
        check_shape(&self.amplitudes, &factorization)?;
        Ok(Self {
            amplitudes: self.amplitudes,
            factorization,
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amplitudes[index]
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn norm(&self) -> T {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// Largest componentwise deviation (max over `|re|`, `|im|` differences).
    pub fn max_abs_diff(&self, other: &StateVector<T>) -> T {
        if self.dim() != other.dim() {
            return T::infinity();
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(T::zero(), |m, (a, b)| m.max(max_part(&(*a - *b))))
    }
}

fn check_shape<T: Real>(amplitudes: &[Complex<T>], factorization: &Factorization) -> Result<()> {
    if amplitudes.is_empty() || factorization.total_dim() != amplitudes.len() {
        return Err(Error::BadFactorization {
            dims: factorization.dims().to_vec(),
            dim: amplitudes.len(),
        });
    }
    if let Some(index) = amplitudes.iter().position(|z| !is_finite(z)) {
        return Err(Error::NonFinite { index });
    }
    Ok(())
}

/// Dense square operator, entries stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Operator<T> {
    dim: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![c(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.entries[i * dim + i] = c(T::one(), T::zero());
        }
        op
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if let Some(index) = entries.iter().position(|z| !is_finite(z)) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { dim, entries })
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| c(x, T::zero())));
        }
        Self::from_entries(dim, entries)
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut op = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            op.entries[i * values.len() + i] = c(v, T::zero());
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Operator<T>) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] = out.entries[i * n + j] + a * rhs.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Operator<T>) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Operator<T>) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Operator<T>,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        self.check_dim(rhs.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    /// Entrywise max-norm distance; infinite for mismatched dimensions.
    pub fn max_abs_diff(&self, other: &Operator<T>) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(T::zero(), |m, (a, b)| m.max(max_part(&(*a - *b))))
    }

    pub fn max_abs(&self) -> T {
        self.entries
            .iter()
            .fold(T::zero(), |m, z| m.max(max_part(z)))
    }

    /// `⟨ψ|self|ψ⟩` on a raw vector.
    pub fn expectation(&self, v: &[Complex<T>]) -> Result<Complex<T>> {
        let w = self.apply_raw(v)?;
        inner_raw(v, &w)
    }

    pub fn apply_raw(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_dim(v.len())?;
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(c(T::zero(), T::zero()), |acc, (a, x)| acc + *a * *x)
            })
            .collect())
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_abs_diff(&self.adjoint()) <= T::structural_tol()
    }

    pub fn is_unitary(&self) -> bool {
        match self.adjoint().matmul(self) {
            Ok(p) => p.max_abs_diff(&Self::identity(self.dim)) <= T::structural_tol(),
            Err(_) => false,
        }
    }

    /// `P² = P = P†` within the structural tolerance.
    pub fn is_projector(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        match self.matmul(self) {
            Ok(sq) => sq.max_abs_diff(self) <= T::structural_tol(),
            Err(_) => false,
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

/// Kronecker product of two states; factorizations are concatenated.
pub fn tensor_state<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> StateVector<T> {
    StateVector {
        amplitudes: kron_vec(&a.amplitudes, &b.amplitudes),
        factorization: a.factorization.tensor(&b.factorization),
    }
}

/// Kronecker product `p ⊗ q` with the same index convention as [`tensor_state`].
pub fn tensor_operator<T: Real>(p: &Operator<T>, q: &Operator<T>) -> Operator<T> {
    let (m, n) = (p.dim, q.dim);
    let dim = m * n;
    let mut out = Operator::zeros(dim);
    for i in 0..m {
        for j in 0..m {
            let a = p.entries[i * m + j];
            for k in 0..n {
                for l in 0..n {
                    out.entries[(i * n + k) * dim + (j * n + l)] = a * q.entries[k * n + l];
                }
            }
        }
    }
    out
}

pub fn inner_product<T: Real>(a: &StateVector<T>, b: &StateVector<T>) -> Result<Complex<T>> {
    inner_raw(&a.amplitudes, &b.amplitudes)
}

/// Matrix-vector product. The result is generally not normalized.
pub fn apply<T: Real>(op: &Operator<T>, s: &StateVector<T>) -> Result<Vec<Complex<T>>> {
    op.apply_raw(&s.amplitudes)
}

/// Rank-one projector `|v⟩⟨v|`.
pub fn projector_from<T: Real>(v: &StateVector<T>) -> Operator<T> {
    let n = v.dim();
    let mut out = Operator::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.entries[i * n + j] = v.amplitudes[i] * v.amplitudes[j].conj();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn qubit(a: f64, b: f64) -> StateVector<f64> {
        StateVector::from_real(&[a, b]).unwrap()
    }

    #[test]
    fn basis_product_ordering() {
        let h = qubit(1.0, 0.0);
        let zero = qubit(1.0, 0.0);
        let s = tensor_state(&h, &zero);
        assert_eq!(
            s.amplitudes(),
            &[z(1.0, 0.0), z(0.0, 0.0), z(0.0, 0.0), z(0.0, 0.0)]
        );
        assert_eq!(s.factorization().dims(), &[2, 2]);
    }

    #[test]
    fn complex_phase_kronecker() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus_i =
            StateVector::new(vec![z(r, 0.0), z(0.0, r)], Factorization::single(2)).unwrap();
        let s = tensor_state(&plus_i, &qubit(1.0, 0.0));
        let expected = [z(r, 0.0), z(0.0, 0.0), z(0.0, r), z(0.0, 0.0)];
        for (a, b) in s.amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_kronecker() {
        let i2 = Operator::<f64>::identity(2);
        assert_eq!(tensor_operator(&i2, &i2), Operator::identity(4));
    }

    #[test]
    fn lifted_projector_is_diagonal_block() {
        let ph = projector_from(&qubit(1.0, 0.0));
        let lifted = tensor_operator(&ph, &Operator::identity(2));
        assert_eq!(lifted, Operator::diagonal(&[1.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn ok_ok_projector_entries_are_quarters() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let ok = projector_from(&qubit(r, -r));
        let both = tensor_operator(&ok, &ok);
        for e in both.entries() {
            assert!((e.re.abs() - 0.25).abs() < 1e-15 && e.im == 0.0);
        }
        // sign pattern of |ok,ok⟩ = (1,-1,-1,1)/2
        let signs = [1.0, -1.0, -1.0, 1.0];
        for i in 0..4 {
            for j in 0..4 {
                assert!((both.get(i, j).re - 0.25 * signs[i] * signs[j]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_one_projectors() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(
            projector_from(&qubit(1.0, 0.0)),
            Operator::diagonal(&[1.0, 0.0])
        );
        let fail = projector_from(&qubit(r, r));
        assert!(fail.entries().iter().all(|e| (e.re - 0.5).abs() < 1e-15));
        let ok = projector_from(&qubit(r, -r));
        let expected = Operator::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert!(ok.max_abs_diff(&expected) < 1e-15);
        assert!(ok.is_projector());
    }

    #[test]
    fn inner_product_basics() {
        let h0 = StateVector::<f64>::basis(4, 0).unwrap();
        assert_eq!(inner_product(&h0, &h0).unwrap(), z(1.0, 0.0));
        let other = StateVector::<f64>::basis(2, 0).unwrap();
        assert!(matches!(
            inner_product(&h0, &other),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_identity_and_mismatch() {
        let s = qubit(0.6, 0.8);
        assert_eq!(apply(&Operator::identity(2), &s).unwrap(), s.amplitudes());
        assert!(apply(&Operator::identity(3), &s).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            StateVector::<f64>::from_real(&[f64::NAN, 1.0]),
            Err(Error::NonFinite { index: 0 })
        ));
        let f = Factorization::from_dims(vec![2, 2]).unwrap();
        assert!(matches!(
            StateVector::new(vec![z(1.0, 0.0), z(0.0, 0.0)], f.clone()),
            Err(Error::BadFactorization { .. })
        ));
        assert!(matches!(
            StateVector::normalize(vec![z(0.0, 0.0); 4], f),
            Err(Error::ZeroVector)
        ));
        assert!(Factorization::from_dims(vec![2, 0]).is_err());
    }

    #[test]
    fn normalize_rescales() {
        let f = Factorization::single(2);
        let s = StateVector::normalize(vec![z(3.0, 0.0), z(0.0, 4.0)], f).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.amplitude(1).im - 0.8).abs() < 1e-15);
    }

    #[test]
    fn predicates() {
        let x = Operator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(x.is_hermitian() && x.is_unitary() && !x.is_projector());
        let not_herm = Operator::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(!not_herm.is_hermitian() && !not_herm.is_unitary());
    }

    #[test]
    fn single_precision_instantiation() {
        let r = std::f32::consts::FRAC_1_SQRT_2;
        let ok = StateVector::<f32>::from_real(&[r, -r]).unwrap();
        let p = projector_from(&ok);
        assert!(p.is_projector());
        let pp = tensor_operator(&p, &Operator::identity(2));
        assert!(pp.is_projector());
    }
}
