//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::fock::GradedVector;

/// Relative eigenvalue threshold for numerical rank.
pub const RANK_TOL: f64 = 1e-8;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(mat: DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(mat)
        .eigenvalues
        .iter()
        .cloned()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Numerical rank of a Hermitian positive semidefinite matrix: eigenvalues
/// above `RANK_TOL` times the largest.
pub fn psd_rank(mat: DMatrix<Complex64>) -> usize {
    if mat.nrows() == 0 {
        return 0;
    }
    let ev = hermitian_eigenvalues(mat);
    let top = ev.last().cloned().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    ev.iter().filter(|&&v| v > RANK_TOL * top).count()
}

/// Rank of the span of graded vectors under the Fock inner product. Vectors
/// are normalized first so that their scale does not affect the threshold.
pub fn gram_rank(vectors: &[GradedVector], weights: &[f64]) -> usize {
    let normalized: Vec<GradedVector> = vectors
        .iter()
        .filter_map(|v| {
            let n = v.norm_sqr(weights).sqrt();
            (n > 1e-300).then(|| v.scaled(Complex64::new(1.0 / n, 0.0)))
        })
        .collect();
    let d = normalized.len();
    let mut gram = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 0..d {
        for j in i..d {
            let g = normalized[i].inner(&normalized[j], weights);
            gram[(i, j)] = g;
            gram[(j, i)] = g.conj();
        }
    }
    psd_rank(gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::FockTensor;

    #[test]
    fn rank_of_dependent_vectors() {
        let w = [1.0, 2.0];
        let a = GradedVector::from_tensor_unchecked(FockTensor::real_vector(&[1.0, 0.0]), 1);
        let b = GradedVector::from_tensor_unchecked(FockTensor::real_vector(&[2.0, 0.0]), 1);
        let c = GradedVector::from_tensor_unchecked(FockTensor::real_vector(&[0.0, 1.0]), 1);
        assert_eq!(gram_rank(&[a.clone(), b.clone()], &w), 1);
        assert_eq!(gram_rank(&[a, b, c, GradedVector::vacuum(2, 1)], &w), 3);
        assert_eq!(gram_rank(&[], &w), 0);
    }
}
