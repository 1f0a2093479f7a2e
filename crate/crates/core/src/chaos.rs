//! Power jumps, orthogonal polynomials of the jump measure and the chaos
//! decomposition by multiple integrals.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    annihilate, create, neutral, symmetric_spanning_set, GradedOperator, GradedVector,
};
use crate::kernel::QKernel;
use crate::levy::{JumpMeasure, LevySpace};
use crate::linalg::gram_rank;
use crate::symmetrize::{symmetrize, symmetrize_slots, SYMMETRY_TOL};
use crate::tensor::{decode, FockTensor};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Norms below this stop the Stieltjes procedure.
pub const DEGENERATE_TOL: f64 = 1e-14;

/// Monic orthogonal polynomials `p⁰ … p^{K−1}` of a `K`-atom measure.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoPolyBasis {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    /// `values[k][j] = p^k(x_j)`.
    values: Vec<Vec<f64>>,
    /// Ascending monomial coefficients, `coefficients[k].len() == k + 1`.
    coefficients: Vec<Vec<f64>>,
    a: Vec<f64>,
    b: Vec<f64>,
    norms: Vec<f64>,
}

impl OrthoPolyBasis {
    /// Number of polynomials, equal to the number of atoms.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Values of `p^k` on the atoms; zero for `k ≥ K`.
    pub fn values(&self, k: usize) -> Vec<f64> {
        self.values
            .get(k)
            .cloned()
            .unwrap_or_else(|| vec![0.0; self.atoms.len()])
    }

    pub fn coefficients(&self, k: usize) -> &[f64] {
        &self.coefficients[k]
    }

    /// `a_k = C_k / C_{k−1}` for `1 ≤ k < K`; `a_0 = 0`.
    pub fn a(&self, k: usize) -> f64 {
        self.a[k]
    }

    /// `b_k = ⟨x p^k, p^k⟩ / C_k`.
    pub fn b(&self, k: usize) -> f64 {
        self.b[k]
    }

    /// `C_k = ∫ |p^k|² dν`.
    pub fn norm(&self, k: usize) -> f64 {
        self.norms[k]
    }

    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// `x p^k` on the atoms, written through the recurrence as
    /// `p^{k+1} + b_k p^k + a_k p^{k−1}` with `p^K = p^{−1} = 0`.
    pub fn shifted(&self, k: usize) -> Vec<f64> {
        let up = self.values(k + 1);
        let here = self.values(k);
        let down = if k == 0 {
            vec![0.0; self.atoms.len()]
        } else {
            self.values(k - 1)
        };
        (0..self.atoms.len())
            .map(|j| up[j] + self.b[k] * here[j] + self.a[k] * down[j])
            .collect()
    }

    /// `Σ_j p^k(x_j) p^l(x_j) w_j`.
    pub fn gram(&self, k: usize, l: usize) -> f64 {
        let (pk, pl) = (self.values(k), self.values(l));
        (0..self.atoms.len())
            .map(|j| pk[j] * pl[j] * self.weights[j])
            .sum()
    }

    /// Largest pointwise residual of the three-term recurrence on the atoms.
    pub fn favard_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.len() {
            let lhs: Vec<f64> = self.values[k]
                .iter()
                .zip(&self.atoms)
                .map(|(p, x)| x * p)
                .collect();
            let rhs = self.shifted(k);
            for (l, r) in lhs.iter().zip(&rhs) {
                worst = worst.max((l - r).abs());
            }
        }
        worst
    }

    /// Largest `|⟨p^k,p^l⟩ − δ_{kl} C_k| / √(C_k C_l)`.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.len() {
            for l in 0..self.len() {
                let target = if k == l { self.norms[k] } else { 0.0 };
                let scale = (self.norms[k] * self.norms[l]).sqrt();
                worst = worst.max((self.gram(k, l) - target).abs() / scale);
            }
        }
        worst
    }
}

/// Stieltjes procedure on the atoms of `ν`.
pub fn ortho_polys(jumps: &JumpMeasure) -> Result<OrthoPolyBasis> {
    let xs = jumps.atoms().to_vec();
    let ws = jumps.weights().to_vec();
    let kk = xs.len();
    let inner = |p: &[f64], q: &[f64]| -> f64 { (0..kk).map(|j| p[j] * q[j] * ws[j]).sum() };

    let mut values: Vec<Vec<f64>> = vec![vec![1.0; kk]];
    let mut coefficients: Vec<Vec<f64>> = vec![vec![1.0]];
    let mut a = Vec::with_capacity(kk);
    let mut b = Vec::with_capacity(kk);
    let mut norms: Vec<f64> = Vec::with_capacity(kk);
    for k in 0..kk {
        let c = inner(&values[k], &values[k]);
        if c <= DEGENERATE_TOL {
            return Err(Error::DegenerateMeasure { index: k, norm: c });
        }
        let xp: Vec<f64> = values[k].iter().zip(&xs).map(|(p, x)| x * p).collect();
        let bk = inner(&xp, &values[k]) / c;
        let ak = if k == 0 { 0.0 } else { c / norms[k - 1] };
        norms.push(c);
        a.push(ak);
        b.push(bk);
        if k + 1 == kk {
            break;
        }
        let next: Vec<f64> = (0..kk)
            .map(|j| {
                let down = if k == 0 { 0.0 } else { values[k - 1][j] };
                (xs[j] - bk) * values[k][j] - ak * down
            })
            .collect();
        let mut coeff = vec![0.0; k + 2];
        for (d, c) in coefficients[k].iter().enumerate() {
            coeff[d + 1] += c;
            coeff[d] -= bk * c;
        }
        if k > 0 {
            for (d, c) in coefficients[k - 1].iter().enumerate() {
                coeff[d] -= ak * c;
            }
        }
        values.push(next);
        coefficients.push(coeff);
    }
    Ok(OrthoPolyBasis {
        atoms: xs,
        weights: ws,
        values,
        coefficients,
        a,
        b,
        norms,
    })
}

/// Coefficients `c_j` with `x^k = Σ_j c_j p^j` on the atoms.
pub fn monomial_in_basis(basis: &OrthoPolyBasis, k: usize) -> Vec<f64> {
    let mono: Vec<f64> = basis.atoms.iter().map(|x| x.powi(k as i32)).collect();
    (0..basis.len())
        .map(|j| {
            let pj = &basis.values[j];
            let dot: f64 = (0..mono.len())
                .map(|i| mono[i] * pj[i] * basis.weights[i])
                .sum();
            dot / basis.norms[j]
        })
        .collect()
}

/// `X_k(f) = a⁺(f⊗μ_{k−1}) + a⁰(f⊗μ_k) + a⁻(f⊗μ_{k−1})`.
pub fn power_jump(
    space: &LevySpace,
    f: &FockTensor,
    k: usize,
    cutoff: usize,
) -> Result<GradedOperator> {
    if k == 0 {
        return Err(Error::Range {
            what: "power jump order",
            value: 0,
            range: "1..".into(),
        });
    }
    let pk = space.product();
    let lower = space.lift_monomial(f, k - 1);
    let upper = space.lift_monomial(f, k);
    Ok(GradedOperator::linear_combination(&[
        (ONE, &create(pk, &lower, cutoff)),
        (ONE, &neutral(pk, &upper, cutoff)),
        (ONE, &annihilate(pk, &lower, cutoff)),
    ]))
}

/// `Y_k(f) = a⁺(f⊗p^k) + a⁰(f⊗(p^{k+1} + b_k p^k + a_k p^{k−1})) + a⁻(f⊗p^k)`.
pub fn orthogonalized_jump(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    f: &FockTensor,
    k: usize,
    cutoff: usize,
) -> Result<GradedOperator> {
    if k >= basis.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            valid: format!("0..{}", basis.len()),
        });
    }
    let pk = space.product();
    let main = space.lift(f, &basis.values(k));
    let diag = space.lift(f, &basis.shifted(k));
    Ok(GradedOperator::linear_combination(&[
        (ONE, &create(pk, &main, cutoff)),
        (ONE, &neutral(pk, &diag, cutoff)),
        (ONE, &annihilate(pk, &main, cutoff)),
    ]))
}

/// `Y_{k_1}(χ_{c_1}) ⋯ Y_{k_n}(χ_{c_n}) Ω` for base cells `c`.
pub fn y_word_vacuum(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    ks: &[usize],
    cells: &[usize],
    cutoff: usize,
) -> Result<GradedVector> {
    if ks.len() != cells.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} orders for {} cells",
            ks.len(),
            cells.len()
        )));
    }
    let m = space.base_sites();
    let mut v = GradedVector::vacuum(space.product_sites(), cutoff);
    for (&k, &c) in ks.iter().zip(cells).rev() {
        v = orthogonalized_jump(space, basis, &FockTensor::unit(m, c), k, cutoff)?.apply(&v);
    }
    Ok(v)
}

/// Multi-index `α = (α_0, α_1, …)`: `α_k` slots carry `p^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChaosIndex {
    counts: Vec<usize>,
}

impl ChaosIndex {
    pub fn new(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(k).copied().unwrap_or(0)
    }

    /// `|α|`.
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Polynomial order of each slot, nondecreasing.
    pub fn orders(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat(k).take(c))
            .collect()
    }

    /// `(start, len)` of each nonempty group of equal orders.
    pub fn groups(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        let mut out = Vec::new();
        for &c in &self.counts {
            if c > 0 {
                out.push((start, c));
            }
            start += c;
        }
        out
    }

    /// `Π_k α_k! C_k^{α_k}`.
    pub fn norm_weight(&self, basis: &OrthoPolyBasis) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let fact: f64 = (1..=c).map(|i| i as f64).product();
                fact * basis.norm(k).powi(c as i32)
            })
            .product()
    }

    /// All `α` with `|α| = n` and `α_k = 0` for `k ≥ kk`.
    pub fn enumerate(n: usize, kk: usize) -> Vec<ChaosIndex> {
        fn rec(n: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<ChaosIndex>) {
            if slots == 1 {
                cur.push(n);
                out.push(ChaosIndex::new(cur.clone()));
                cur.pop();
                return;
            }
            for c in (0..=n).rev() {
                cur.push(c);
                rec(n - c, slots - 1, cur, out);
                cur.pop();
            }
        }
        if kk == 0 {
            return if n == 0 {
                vec![ChaosIndex::new(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(n, kk, &mut Vec::new(), &mut out);
        out
    }
}

/// Projects `f` onto tensors that are Q-symmetric inside every group of `α`;
/// returns the projection and the largest entry moved.
pub fn group_symmetrize(base: &QKernel, alpha: &ChaosIndex, f: &FockTensor) -> (FockTensor, f64) {
    let mut g = f.clone();
    for (start, len) in alpha.groups() {
        g = symmetrize_slots(base, &g, start, len);
    }
    let defect = g.max_abs_diff(f);
    (g, defect)
}

/// `I_α f = P_n[f(t_1..t_n) p^{k_1}(x_1) ⋯ p^{k_n}(x_n)]`.
pub fn multiple_integral(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    alpha: &ChaosIndex,
    f: &FockTensor,
    cutoff: usize,
) -> Result<GradedVector> {
    let n = alpha.total();
    if f.degree() != n || f.m() != space.base_sites() {
        return Err(Error::ShapeMismatch(format!(
            "integrand of degree {} on {} cells for |α| = {n} on {} cells",
            f.degree(),
            f.m(),
            space.base_sites()
        )));
    }
    if n > cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: n,
        });
    }
    if alpha.counts().len() > basis.len() {
        return Err(Error::IndexOutOfRange {
            index: alpha.counts().len() - 1,
            valid: format!("0..{}", basis.len()),
        });
    }
    let (_, defect) = group_symmetrize(space.base(), alpha, f);
    if defect > SYMMETRY_TOL * f.max_abs().max(1.0) {
        return Err(Error::NotGroupSymmetric { defect });
    }
    let lifted = lift_integrand(space, basis, alpha, f)?;
    let sym = symmetrize(space.product(), &lifted);
    Ok(GradedVector::from_tensor_unchecked(sym, cutoff))
}

fn lift_integrand(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    alpha: &ChaosIndex,
    f: &FockTensor,
) -> Result<FockTensor> {
    let n = alpha.total();
    let kk = basis.len();
    let m = space.base_sites();
    let orders = alpha.orders();
    let polys: Vec<Vec<f64>> = orders.iter().map(|&k| basis.values(k)).collect();
    let mut out = FockTensor::try_zeros(space.product_sites(), n)?;
    let mut cells = vec![0; n];
    let mut base_idx = vec![0; n];
    let pm = space.product_sites();
    for flat in 0..out.len() {
        decode(pm, flat, &mut cells);
        let mut weight = 1.0;
        for (r, &c) in cells.iter().enumerate() {
            base_idx[r] = c / kk;
            weight *= polys[r][c % kk];
        }
        if weight != 0.0 {
            out.data_mut()[flat] = f.get(&base_idx) * weight;
        }
    }
    debug_assert_eq!(m * kk, pm);
    Ok(out)
}

/// Random integrand, Q-symmetric within the groups of `α`.
pub fn random_group_symmetric<R: Rng + ?Sized>(
    base: &QKernel,
    alpha: &ChaosIndex,
    rng: &mut R,
) -> FockTensor {
    let mut t = FockTensor::zeros(base.sites(), alpha.total());
    for z in t.data_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    group_symmetrize(base, alpha, &t).0
}

/// Dimension count at one total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionRow {
    pub degree: usize,
    /// `Σ_{|α| = n} dim ℱ_α`.
    pub chaos_sum: usize,
    /// Rank of `P_n` on the product cells.
    pub symmetric_rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChaosReport {
    pub favard_residual: f64,
    pub basis_orthogonality: f64,
    /// Largest `|⟨I_α f, I_β g⟩|` over `α ≠ β`, unit-normalized inputs.
    pub cross_inner: f64,
    /// Largest relative gap in `‖I_α f‖² = Π α_k! C_k^{α_k} ‖f‖²`.
    pub norm_identity: f64,
    pub dimensions: Vec<DimensionRow>,
}

impl ChaosReport {
    pub fn dimensions_match(&self) -> bool {
        self.dimensions
            .iter()
            .all(|r| r.chaos_sum == r.symmetric_rank)
    }
}

/// Orthogonality, norm identity and dimension count for all `α` with
/// `|α| ≤ n_max`, using one random integrand per `α`.
pub fn chaos_orthogonality_report<R: Rng + ?Sized>(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    n_max: usize,
    cutoff: usize,
    rng: &mut R,
) -> Result<ChaosReport> {
    if n_max > cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: n_max,
        });
    }
    let base = space.base();
    let bw = base.weights();
    let pw = space.product().weights();
    let kk = basis.len();

    let mut samples = Vec::new();
    let mut norm_identity: f64 = 0.0;
    for n in 0..=n_max {
        for alpha in ChaosIndex::enumerate(n, kk) {
            let f = random_group_symmetric(base, &alpha, rng);
            let v = multiple_integral(space, basis, &alpha, &f, cutoff)?;
            let lhs = v.norm_sqr(pw);
            let rhs = alpha.norm_weight(basis) * f.norm_sqr(bw);
            norm_identity = norm_identity.max((lhs - rhs).abs() / rhs);
            let unit = v.scaled(Complex64::new(1.0 / lhs.sqrt(), 0.0));
            samples.push((alpha, unit));
        }
    }
    let mut cross_inner: f64 = 0.0;
    for (i, (a, u)) in samples.iter().enumerate() {
        for (b, w) in &samples[i + 1..] {
            if a != b {
                cross_inner = cross_inner.max(u.inner(w, pw).norm());
            }
        }
    }

    let dimensions = (1..=n_max)
        .into_par_iter()
        .map(|n| dimension_row(space, basis, n, cutoff))
        .collect::<Result<Vec<_>>>()?;

    Ok(ChaosReport {
        favard_residual: basis.favard_residual(),
        basis_orthogonality: basis.orthogonality_residual(),
        cross_inner,
        norm_identity,
        dimensions,
    })
}

/// `Σ_α rank{I_α(P_α e_t)}` against the rank of `P_n` on the product cells.
pub fn dimension_row(
    space: &LevySpace,
    basis: &OrthoPolyBasis,
    n: usize,
    cutoff: usize,
) -> Result<DimensionRow> {
    let m = space.base_sites();
    let pw = space.product().weights();
    let mut chaos_sum = 0;
    let mut idx = vec![0; n];
    let total = crate::tensor::tensor_len(m, n)?;
    for alpha in ChaosIndex::enumerate(n, basis.len()) {
        let mut vectors = Vec::with_capacity(total);
        for flat in 0..total {
            decode(m, flat, &mut idx);
            let (f, _) = group_symmetrize(space.base(), &alpha, &FockTensor::basis(m, &idx));
            vectors.push(multiple_integral(space, basis, &alpha, &f, cutoff)?);
        }
        chaos_sum += gram_rank(&vectors, pw);
    }
    let spanning: Vec<GradedVector> = symmetric_spanning_set(space.product(), n)
        .into_iter()
        .map(|t| GradedVector::from_tensor_unchecked(t, cutoff))
        .collect();
    Ok(DimensionRow {
        degree: n,
        chaos_sum,
        symmetric_rank: gram_rank(&spanning, pw),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_anyonic_kernel, SiteGrid};
    use crate::levy::build_levy_space;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn space(m: usize, atoms: Vec<(f64, f64)>, q: Complex64) -> LevySpace {
        let g = SiteGrid::new(
            (0..m).map(|i| i as f64).collect(),
            (0..m).map(|i| 0.5 + 0.25 * i as f64).collect(),
        )
        .unwrap();
        let k = Arc::new(build_anyonic_kernel(g, q).unwrap());
        build_levy_space(k, JumpMeasure::new(atoms).unwrap()).unwrap()
    }

    #[test]
    fn point_mass_basis() {
        let b = ortho_polys(&JumpMeasure::point(0.3)).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.values(0), vec![1.0]);
        assert!((b.norm(0) - 1.0).abs() < 1e-15);
        assert!(b.favard_residual() < 1e-14);
    }

    #[test]
    fn two_atom_basis_by_hand() {
        let b = ortho_polys(&JumpMeasure::new(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap()).unwrap();
        assert_eq!(b.values(1), vec![-1.0, 1.0]);
        assert_eq!(b.coefficients(1), &[0.0, 1.0]);
        assert!(b.b(0).abs() < 1e-15);
        assert!((b.a(1) - 1.0).abs() < 1e-15);
        assert!((b.norm(0) - 1.0).abs() < 1e-15 && (b.norm(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn three_atom_uniform() {
        let third = 1.0 / 3.0;
        let b = ortho_polys(
            &JumpMeasure::new(vec![(0.0, third), (1.0, third), (2.0, 1.0 - 2.0 * third)]).unwrap(),
        )
        .unwrap();
        assert!((b.b(0) - 1.0).abs() < 1e-14);
        // p² = (x−1)² − 2/3 by hand
        let p2: Vec<f64> = [0.0f64, 1.0, 2.0]
            .iter()
            .map(|x| (x - 1.0).powi(2) - 2.0 / 3.0)
            .collect();
        for (a, e) in b.values(2).iter().zip(&p2) {
            assert!((a - e).abs() < 1e-13);
        }
        assert!(b.orthogonality_residual() < 1e-13);
        assert!(b.favard_residual() < 1e-13);
        // coefficients evaluate to the stored values
        for k in 0..3 {
            for (j, x) in b.atoms().iter().enumerate() {
                let v: f64 = b
                    .coefficients(k)
                    .iter()
                    .enumerate()
                    .map(|(d, c)| c * x.powi(d as i32))
                    .sum();
                assert!((v - b.values(k)[j]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn monomials_expand() {
        let b = ortho_polys(&JumpMeasure::new(vec![(-0.5, 0.2), (0.4, 0.3), (2.0, 0.5)]).unwrap())
            .unwrap();
        for k in 0..5 {
            let c = monomial_in_basis(&b, k);
            for (j, x) in b.atoms().iter().enumerate() {
                let v: f64 = (0..3).map(|i| c[i] * b.values(i)[j]).sum();
                assert!((v - x.powi(k as i32)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jumps_on_vacuum() {
        let s = space(
            2,
            vec![(-1.0, 0.5), (1.0, 0.5)],
            Complex64::from_polar(1.0, 0.4),
        );
        let b = ortho_polys(s.jumps()).unwrap();
        let f = FockTensor::real_vector(&[0.7, -1.3]);
        let x1 = power_jump(&s, &f, 1, 3).unwrap();
        let xi = crate::levy::xi(&s, &f, 3);
        assert!(x1.max_difference(&xi, 3) < 1e-13);
        let y0 = orthogonalized_jump(&s, &b, &f, 0, 3).unwrap();
        assert!(y0.max_difference(&xi, 3) < 1e-13);
        let om = GradedVector::vacuum(s.product_sites(), 3);
        for k in 0..2 {
            let v = orthogonalized_jump(&s, &b, &f, k, 3).unwrap().apply(&om);
            assert!(v.component(1).max_abs_diff(&s.lift(&f, &b.values(k))) < 1e-14);
        }
        assert!(matches!(
            orthogonalized_jump(&s, &b, &f, 2, 3),
            Err(Error::IndexOutOfRange { index: 2, .. })
        ));
        assert!(power_jump(&s, &f, 0, 3).is_err());
    }

    #[test]
    fn chaos_index_bookkeeping() {
        let a = ChaosIndex::new(vec![2, 0, 1, 0]);
        assert_eq!(a.counts(), &[2, 0, 1]);
        assert_eq!(a.orders(), vec![0, 0, 2]);
        assert_eq!(a.groups(), vec![(0, 2), (2, 1)]);
        assert_eq!(ChaosIndex::enumerate(3, 3).len(), 10);
        assert_eq!(ChaosIndex::enumerate(2, 1), vec![ChaosIndex::new(vec![2])]);
    }

    #[test]
    fn disjoint_cells_match_y_product() {
        let s = space(
            3,
            vec![(-1.0, 0.3), (0.5, 0.3), (2.0, 0.4)],
            Complex64::from_polar(1.0, 1.1),
        );
        let b = ortho_polys(s.jumps()).unwrap();
        let alpha = ChaosIndex::new(vec![1, 1, 1]);
        for cells in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
            let (f, _) = group_symmetrize(s.base(), &alpha, &FockTensor::basis(3, &cells));
            let lhs = multiple_integral(&s, &b, &alpha, &f, 3).unwrap();
            let rhs = y_word_vacuum(&s, &b, &alpha.orders(), &cells, 3).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_group_symmetric() {
        let s = space(
            2,
            vec![(-1.0, 0.5), (1.0, 0.5)],
            Complex64::from_polar(1.0, 0.4),
        );
        let b = ortho_polys(s.jumps()).unwrap();
        let f = FockTensor::basis(2, &[0, 1]);
        assert!(matches!(
            multiple_integral(&s, &b, &ChaosIndex::new(vec![2]), &f, 3),
            Err(Error::NotGroupSymmetric { .. })
        ));
        assert!(multiple_integral(&s, &b, &ChaosIndex::new(vec![1, 1]), &f, 3).is_ok());
        assert!(matches!(
            multiple_integral(&s, &b, &ChaosIndex::new(vec![1, 1]), &f, 1),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn orthogonality_and_norms() {
        let s = space(
            2,
            vec![(-1.0, 0.5), (1.0, 0.5)],
            Complex64::from_polar(1.0, 0.7),
        );
        let b = ortho_polys(s.jumps()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = chaos_orthogonality_report(&s, &b, 2, 2, &mut rng).unwrap();
        assert!(r.cross_inner < 1e-10, "{r:?}");
        assert!(r.norm_identity < 1e-10, "{r:?}");
        assert!(r.dimensions_match(), "{r:?}");
    }
}
