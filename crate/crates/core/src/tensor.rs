//! Dense complex tensors over the cells of a grid.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest tensor degree handled anywhere in the crate.
pub const MAX_DEGREE: usize = 8;
/// Largest number of entries a single dense tensor may hold.
pub const MAX_ENTRIES: usize = 1 << 22;

/// Complex tensor `f(i_1, …, i_n)` over `{0..m}^n`, row-major with `i_1` most
/// significant. Degree 0 holds a single scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct FockTensor {
    m: usize,
    degree: usize,
    data: Vec<Complex64>,
}

/// Number of entries of a degree-`n` tensor over `m` cells, or an error when
/// it leaves the supported envelope.
pub fn tensor_len(m: usize, n: usize) -> Result<usize> {
    if n > MAX_DEGREE {
        return Err(Error::Range {
            what: "tensor degree",
            value: n,
            range: format!("0..={MAX_DEGREE}"),
        });
    }
    let mut len = 1usize;
    for _ in 0..n {
        len = len.saturating_mul(m);
    }
    if len > MAX_ENTRIES {
        return Err(Error::EnvelopeExceeded(format!(
            "{m}^{n} tensor entries exceed {MAX_ENTRIES}"
        )));
    }
    Ok(len)
}

/// Decodes a flat offset into a multi-index.
pub fn decode(m: usize, mut flat: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % m;
        flat /= m;
    }
}

/// Encodes a multi-index into a flat offset.
pub fn encode(m: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * m + i)
}

impl FockTensor {
    /// Zero tensor of degree `n`.
    ///
    /// # Panics
    /// If `m^n` leaves the envelope checked by [`tensor_len`].
    pub fn zeros(m: usize, degree: usize) -> Self {
        let len = tensor_len(m, degree).expect("tensor outside supported envelope");
        Self {
            m,
            degree,
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn try_zeros(m: usize, degree: usize) -> Result<Self> {
        let len = tensor_len(m, degree)?;
        Ok(Self {
            m,
            degree,
            data: vec![Complex64::new(0.0, 0.0); len],
        })
    }

    pub fn scalar(m: usize, value: Complex64) -> Self {
        Self {
            m,
            degree: 0,
            data: vec![value],
        }
    }

    pub fn from_data(m: usize, degree: usize, data: Vec<Complex64>) -> Result<Self> {
        let len = tensor_len(m, degree)?;
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "degree {degree} tensor over {m} cells needs {len} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { m, degree, data })
    }

    /// Degree-1 tensor from site values.
    pub fn vector(values: Vec<Complex64>) -> Self {
        Self {
            m: values.len(),
            degree: 1,
            data: values,
        }
    }

    /// Degree-1 tensor from real site values.
    pub fn real_vector(values: &[f64]) -> Self {
        Self::vector(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Indicator `e_i` of a single cell.
    pub fn unit(m: usize, i: usize) -> Self {
        let mut t = Self::zeros(m, 1);
        t.data[i] = Complex64::new(1.0, 0.0);
        t
    }

    /// Indicator of a set of cells.
    pub fn indicator(m: usize, cells: &[usize]) -> Self {
        let mut t = Self::zeros(m, 1);
        for &i in cells {
            t.data[i] = Complex64::new(1.0, 0.0);
        }
        t
    }

    /// `e_{i_1} ⊗ … ⊗ e_{i_n}`.
    pub fn basis(m: usize, idx: &[usize]) -> Self {
        let mut t = Self::zeros(m, idx.len());
        t.data[encode(m, idx)] = Complex64::new(1.0, 0.0);
        t
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        debug_assert_eq!(idx.len(), self.degree);
        self.data[encode(self.m, idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Complex64) {
        let k = encode(self.m, idx);
        self.data[k] = value;
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.m == other.m && self.degree == other.degree,
            "tensor shapes differ: ({}, {}) vs ({}, {})",
            self.m,
            self.degree,
            other.m,
            other.degree
        );
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.check_same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &Self) {
        self.check_same_shape(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            m: self.m,
            degree: self.degree,
            data: self.data.iter().map(|z| c * z).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        Self {
            m: self.m,
            degree: self.degree,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            m: self.m,
            degree: self.degree,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Pointwise product of two degree-1 tensors.
    pub fn pointwise(&self, other: &Self) -> Self {
        self.check_same_shape(other);
        Self {
            m: self.m,
            degree: self.degree,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// `f ⊗ g`.
    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "tensor product over different grids");
        let mut out = Self::zeros(self.m, self.degree + other.degree);
        let k = other.data.len();
        for (a, x) in self.data.iter().enumerate() {
            for (b, y) in other.data.iter().enumerate() {
                out.data[a * k + b] = x * y;
            }
        }
        out
    }

    /// `f_1 ⊗ … ⊗ f_n` of degree-1 factors; degree 0 when `factors` is empty.
    pub fn tensor_all(m: usize, factors: &[FockTensor]) -> Self {
        factors
            .iter()
            .fold(Self::scalar(m, Complex64::new(1.0, 0.0)), |acc, f| {
                acc.tensor(f)
            })
    }

    /// Products `σ_{i_1}⋯σ_{i_n}` for every flat offset.
    pub fn weight_products(m: usize, degree: usize, weights: &[f64]) -> Vec<f64> {
        let mut w = vec![1.0];
        for _ in 0..degree {
            let mut next = Vec::with_capacity(w.len() * m);
            for &a in &w {
                for &s in &weights[..m] {
                    next.push(a * s);
                }
            }
            w = next;
        }
        w
    }

    /// `⟨f, g⟩ = Σ f conj(g) Πσ`.
    pub fn inner(&self, other: &Self, weights: &[f64]) -> Complex64 {
        self.check_same_shape(other);
        let w = Self::weight_products(self.m, self.degree, weights);
        self.data
            .iter()
            .zip(&other.data)
            .zip(&w)
            .map(|((a, b), s)| a * b.conj() * s)
            .sum()
    }

    pub fn norm_sqr(&self, weights: &[f64]) -> f64 {
        self.inner(self, weights).re
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.check_same_shape(other);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Integral `Σ f(i) σ_i` of a degree-1 tensor.
    pub fn integral(&self, weights: &[f64]) -> Complex64 {
        debug_assert_eq!(self.degree, 1);
        self.data.iter().zip(weights).map(|(z, s)| z * s).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn encode_decode_round_trip() {
        let mut idx = [0; 3];
        for flat in 0..27 {
            decode(3, flat, &mut idx);
            assert_eq!(encode(3, &idx), flat);
        }
        assert_eq!(encode(3, &[1, 0, 2]), 11);
    }

    #[test]
    fn tensor_product_layout() {
        let f = FockTensor::real_vector(&[1.0, 2.0]);
        let g = FockTensor::real_vector(&[3.0, 5.0]);
        let fg = f.tensor(&g);
        assert_eq!(fg.get(&[0, 1]), c(5.0));
        assert_eq!(fg.get(&[1, 0]), c(6.0));
    }

    #[test]
    fn weighted_inner_product() {
        let f = FockTensor::real_vector(&[1.0, 2.0]);
        let w = [0.5, 3.0];
        assert_eq!(f.norm_sqr(&w), 0.5 + 12.0);
        let ff = f.tensor(&f);
        assert!((ff.norm_sqr(&w) - 12.5f64.powi(2)).abs() < 1e-12);
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(tensor_len(2, MAX_DEGREE + 1).is_err());
        assert!(tensor_len(100, 8).is_err());
        assert_eq!(tensor_len(3, 0).unwrap(), 1);
    }
}
