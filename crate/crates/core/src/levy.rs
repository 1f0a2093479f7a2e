//! Q-Lévy processes on the product of the site grid with a finite jump set.

use std::sync::Arc;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{moment_tensors, omega, FieldConfig};
use crate::fock::{
    annihilate, create, neutral, symmetric_spanning_set, GradedOperator, GradedVector,
};
use crate::kernel::{QKernel, SiteGrid};
use crate::linalg::gram_rank;
use crate::partitions::cumulants_from_moments;
use crate::symmetrize::symmetrize;
use crate::tensor::{decode, encode, FockTensor};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Tolerance on the total mass of a jump measure.
pub const MASS_TOL: f64 = 1e-12;

/// Finitely supported probability measure `ν = Σ w_j δ_{x_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl JumpMeasure {
    pub fn new(atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("at least one atom".into()));
        }
        for (i, &(x, w)) in atoms.iter().enumerate() {
            if !x.is_finite() || !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidMeasure(format!(
                    "atom ({x}, {w}) needs finite x and positive weight"
                )));
            }
            if atoms[..i].iter().any(|&(y, _)| y == x) {
                return Err(Error::InvalidMeasure(format!("atom {x} repeated")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(Self {
            atoms: atoms.iter().map(|a| a.0).collect(),
            weights: atoms.iter().map(|a| a.1).collect(),
        })
    }

    /// Point mass `δ_x`.
    pub fn point(x: f64) -> Self {
        Self {
            atoms: vec![x],
            weights: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫ x^p ν(dx)`.
    pub fn moment(&self, p: usize) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x.powi(p as i32) * w)
            .sum()
    }

    /// Masses `w_j / x_j²` of the Lévy measure; `None` at the atom `0`.
    pub fn levy_masses(&self) -> Vec<Option<f64>> {
        self.atoms
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| (x != 0.0).then(|| w / (x * x)))
            .collect()
    }

    /// Weight of `ν` at `0`.
    pub fn zero_weight(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .filter(|(x, _)| **x == 0.0)
            .map(|(_, w)| w)
            .sum()
    }

    /// `∫ x^n ṽ(dx)` over the nonzero atoms.
    pub fn levy_moment(&self, n: usize) -> f64 {
        self.atoms
            .iter()
            .zip(self.levy_masses())
            .filter_map(|(&x, v)| v.map(|v| x.powi(n as i32) * v))
            .sum()
    }

    /// Values `x_j^k` on the atoms.
    pub fn monomial(&self, k: usize) -> Vec<f64> {
        self.atoms.iter().map(|x| x.powi(k as i32)).collect()
    }
}

/// Fock data over `T × supp(ν)`: cells `(t_i, x_j)` at index `i·K + j` with
/// mass `σ_i w_j` and kernel `Q(t_i, t_{i'})`.
#[derive(Debug, Clone)]
pub struct LevySpace {
    base: Arc<QKernel>,
    jumps: JumpMeasure,
    product: Arc<QKernel>,
}

impl LevySpace {
    pub fn base(&self) -> &Arc<QKernel> {
        &self.base
    }

    pub fn jumps(&self) -> &JumpMeasure {
        &self.jumps
    }

    /// Kernel on the product cells.
    pub fn product(&self) -> &Arc<QKernel> {
        &self.product
    }

    pub fn base_sites(&self) -> usize {
        self.base.sites()
    }

    pub fn product_sites(&self) -> usize {
        self.product.sites()
    }

    /// `f ⊗ g` as a degree-1 tensor on the product cells, from values of `f`
    /// on the base cells and of `g` on the atoms.
    pub fn lift(&self, f: &FockTensor, g: &[f64]) -> FockTensor {
        let k = self.jumps.len();
        let mut out = FockTensor::zeros(self.product_sites(), 1);
        for i in 0..self.base_sites() {
            for (j, gj) in g.iter().enumerate() {
                out.data_mut()[i * k + j] = f.data()[i] * *gj;
            }
        }
        out
    }

    /// `f ⊗ μ_k` where `μ_k(x) = x^k`.
    pub fn lift_monomial(&self, f: &FockTensor, k: usize) -> FockTensor {
        self.lift(f, &self.jumps.monomial(k))
    }

    /// The diagonal rescaling `(U g)(t, x) = x g(t, x)` that carries the
    /// `ν`-form to the Lévy-measure form off `x = 0`; reporting only.
    pub fn u_transform(&self, g: &FockTensor) -> FockTensor {
        let k = self.jumps.len();
        let mut out = g.clone();
        for (c, z) in out.data_mut().iter_mut().enumerate() {
            *z *= self.jumps.atoms()[c % k];
        }
        out
    }
}

pub fn build_levy_space(base: Arc<QKernel>, jumps: JumpMeasure) -> Result<LevySpace> {
    let m = base.sites();
    let k = jumps.len();
    let mut sites = Vec::with_capacity(m * k);
    let mut weights = Vec::with_capacity(m * k);
    let mut base_index = Vec::with_capacity(m * k);
    for i in 0..m {
        for j in 0..k {
            // cells are ordered by (t, x); the coordinate is just that label
            sites.push((i * k + j) as f64);
            weights.push(base.weights()[i] * jumps.weights()[j]);
            base_index.push(i);
        }
    }
    let grid = SiteGrid::new(sites, weights)?;
    let product = Arc::new(base.pulled_back(grid, &base_index));
    Ok(LevySpace {
        base,
        jumps,
        product,
    })
}

/// `⟨f,ξ⟩ = a⁺(f⊗μ₀) + a⁰(f⊗μ₁) + a⁻(f⊗μ₀)`.
pub fn xi(space: &LevySpace, f: &FockTensor, cutoff: usize) -> GradedOperator {
    let k = &space.product;
    let f0 = space.lift_monomial(f, 0);
    let f1 = space.lift_monomial(f, 1);
    GradedOperator::linear_combination(&[
        (ONE, &create(k, &f0, cutoff)),
        (ONE, &neutral(k, &f1, cutoff)),
        (ONE, &annihilate(k, &f0, cutoff)),
    ])
}

/// `τ(⟨f_1,ξ⟩⋯⟨f_n,ξ⟩)`.
pub fn xi_vacuum_state(space: &LevySpace, word: &[FockTensor], cutoff: usize) -> Result<Complex64> {
    if word.len() > cutoff {
        return Err(Error::WordTooLong {
            len: word.len(),
            cutoff,
        });
    }
    // degrees above n/2 never return to the vacuum
    let inner = (word.len() / 2).max(1);
    let mut v = GradedVector::vacuum(space.product_sites(), inner);
    for f in word.iter().rev() {
        v = xi(space, f, inner).apply(&v);
    }
    Ok(v.vacuum_part())
}

/// `⟨χ_i, ξ⟩` for every base cell.
pub fn cell_xi(space: &LevySpace, cutoff: usize) -> Vec<GradedOperator> {
    let m = space.base_sites();
    (0..m)
        .map(|i| xi(space, &FockTensor::unit(m, i), cutoff))
        .collect()
}

/// Cumulant identification for `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyCumulantReport {
    /// Largest deviation of `c_n` from `(∫x^{n−2}dν)·diag(σ)`, per degree `1..=n_max`.
    pub per_degree: Vec<f64>,
    /// `(n, ∫x^{n−2}dν, ∫x^n dṽ)` for `3 ≤ n ≤ n_max`.
    pub levy_moments: Vec<(usize, f64, f64)>,
    /// Largest `|C_n(⟨χ_i,ξ⟩) − ∫x^n dṽ · σ_i|` over cells, `3 ≤ n ≤ n_max`.
    pub levy_residual: f64,
    pub cumulants: Vec<FockTensor>,
}

impl LevyCumulantReport {
    pub fn max_residual(&self) -> f64 {
        self.per_degree
            .iter()
            .cloned()
            .fold(self.levy_residual, f64::max)
    }
}

/// `(∫x^{n−2}dν)` times the diagonal tensor with mass `σ_i` on `(i,…,i)`; zero for `n = 1`.
pub fn expected_levy_cumulant(space: &LevySpace, n: usize) -> FockTensor {
    let m = space.base_sites();
    let mut t = FockTensor::zeros(m, n);
    if n >= 2 {
        let c = space.jumps.moment(n - 2);
        for i in 0..m {
            t.set(
                &vec![i; n],
                Complex64::new(c * space.base.weights()[i], 0.0),
            );
        }
    }
    t
}

pub fn verify_levy_cumulants(
    space: &LevySpace,
    cutoff: usize,
    n_max: usize,
) -> Result<LevyCumulantReport> {
    if n_max > cutoff.min(6) {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: n_max,
        });
    }
    let ms = moment_tensors(&cell_xi(space, cutoff), n_max)?;
    let cs = cumulants_from_moments(&space.base, &ms)?;
    let per_degree = cs
        .iter()
        .enumerate()
        .map(|(d, c)| c.max_abs_diff(&expected_levy_cumulant(space, d + 1)))
        .collect();
    let mut levy_moments = Vec::new();
    let mut levy_residual: f64 = 0.0;
    for n in 3..=n_max {
        let lm = space.jumps.levy_moment(n);
        levy_moments.push((n, space.jumps.moment(n - 2), lm));
        for i in 0..space.base_sites() {
            let value = cs[n - 1].get(&vec![i; n]);
            levy_residual = levy_residual.max((value - lm * space.base.weights()[i]).norm());
        }
    }
    Ok(LevyCumulantReport {
        per_degree,
        levy_moments,
        levy_residual,
        cumulants: cs,
    })
}

/// For a single-atom measure `δ_λ`, the largest difference between
/// `⟨χ_i,ξ⟩` and `⟨χ_i,ω⟩` at parameter `λ` on degrees `0..cutoff`.
pub fn point_mass_residual(space: &LevySpace, cutoff: usize) -> Result<f64> {
    if space.jumps.len() != 1 {
        return Err(Error::Precondition("a single-atom jump measure".into()));
    }
    let cfg = FieldConfig::from_arc(Arc::clone(&space.base), space.jumps.atoms()[0], cutoff)?;
    let m = space.base_sites();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let e = FockTensor::unit(m, i);
        let a = xi(space, &e, cutoff);
        let b = omega(&cfg, &e);
        for n in 0..cutoff {
            for f in symmetric_spanning_set(&space.base, n) {
                let v = GradedVector::from_tensor_unchecked(f, cutoff);
                worst = worst.max(a.apply(&v).max_abs_diff(&b.apply(&v)));
            }
        }
    }
    Ok(worst)
}

fn support(f: &FockTensor) -> Vec<usize> {
    (0..f.len()).filter(|&i| f.data()[i].norm() > 0.0).collect()
}

/// `|τ(f-left · g · f-right) − τ(f-left · f-right) τ(g)|` for words whose
/// `f`s and `g`s have disjoint supports.
pub fn pyramidal_check(
    space: &LevySpace,
    left: &[FockTensor],
    middle: &[FockTensor],
    right: &[FockTensor],
    cutoff: usize,
) -> Result<f64> {
    let fs: Vec<usize> = left.iter().chain(right).flat_map(support).collect();
    for g in middle {
        if let Some(&cell) = support(g).iter().find(|c| fs.contains(c)) {
            return Err(Error::SupportOverlap(cell));
        }
    }
    pyramidal_residual(space, left, middle, right, cutoff)
}

/// The factorization residual without the disjointness check.
pub fn pyramidal_residual(
    space: &LevySpace,
    left: &[FockTensor],
    middle: &[FockTensor],
    right: &[FockTensor],
    cutoff: usize,
) -> Result<f64> {
    let whole: Vec<_> = left.iter().chain(middle).chain(right).cloned().collect();
    let outer: Vec<_> = left.iter().chain(right).cloned().collect();
    let lhs = xi_vacuum_state(space, &whole, cutoff)?;
    let rhs = xi_vacuum_state(space, &outer, cutoff)? * xi_vacuum_state(space, middle, cutoff)?;
    Ok((lhs - rhs).norm())
}

/// Random real test function supported on `cells`.
pub fn random_supported<R: Rng + ?Sized>(m: usize, cells: &[usize], rng: &mut R) -> FockTensor {
    let mut f = FockTensor::zeros(m, 1);
    for &c in cells {
        f.data_mut()[c] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
    }
    f
}

/// Largest pyramidal residual over `trials` random configurations with
/// `f`s supported in `a_cells`, `g`s in `b_cells`, and total length in `1..=max_len`.
pub fn pyramidal_trials<R: Rng + ?Sized>(
    space: &LevySpace,
    a_cells: &[usize],
    b_cells: &[usize],
    trials: usize,
    max_len: usize,
    cutoff: usize,
    rng: &mut R,
) -> Result<f64> {
    if let Some(&c) = a_cells.iter().find(|c| b_cells.contains(c)) {
        return Err(Error::SupportOverlap(c));
    }
    let m = space.base_sites();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let total = rng.gen_range(1..=max_len);
        let n_g = rng.gen_range(0..=total);
        let n_f = total - n_g;
        let n_left = rng.gen_range(0..=n_f);
        let pick = |cells: &[usize], rng: &mut R| {
            let mut chosen: Vec<usize> = cells.to_vec();
            chosen.shuffle(rng);
            let keep = rng.gen_range(1..=chosen.len());
            chosen.truncate(keep);
            random_supported(m, &chosen, rng)
        };
        let left: Vec<_> = (0..n_left).map(|_| pick(a_cells, rng)).collect();
        let middle: Vec<_> = (0..n_g).map(|_| pick(b_cells, rng)).collect();
        let right: Vec<_> = (0..n_f - n_left).map(|_| pick(a_cells, rng)).collect();
        worst = worst.max(pyramidal_check(space, &left, &middle, &right, cutoff)?);
    }
    Ok(worst)
}

/// Vacuum cyclicity at word length `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicityReport {
    /// Rank of `{⟨χ_{i_1},ξ⟩⋯⟨χ_{i_l},ξ⟩Ω : l ≤ L}`.
    pub achieved: usize,
    /// Rank of `{Ω} ∪ {P_i[⊗_k (χ_{c_k} ⊗ x^{l_k})] : i + Σl ≤ L}`.
    pub target: usize,
    /// Rank of both families together. Equals `target` when the words lie in the target span.
    pub joint: usize,
    /// Smallest word length `L' ≤ N` whose words span the target family, if any.
    pub covering_len: Option<usize>,
}

impl CyclicityReport {
    /// Words of length `≤ L` lie in the target span.
    pub fn contained(&self) -> bool {
        self.joint == self.target
    }

    /// Target span is reached by longer words within the cutoff.
    pub fn covered(&self) -> bool {
        self.covering_len.is_some()
    }
}

fn word_vectors(space: &LevySpace, len: usize, cutoff: usize) -> Vec<Vec<GradedVector>> {
    let ops = cell_xi(space, cutoff);
    let mut by_len = vec![vec![GradedVector::vacuum(space.product.sites(), cutoff)]];
    for l in 0..len {
        let next: Vec<_> = by_len[l]
            .iter()
            .flat_map(|v| ops.iter().map(move |op| op.apply(v)))
            .collect();
        by_len.push(next);
    }
    by_len
}

fn target_vectors(space: &LevySpace, max_len: usize, cutoff: usize) -> Vec<GradedVector> {
    let m = space.base_sites();
    let pk = &space.product;
    let mut targets = vec![GradedVector::vacuum(pk.sites(), cutoff)];
    for degree in 1..=max_len {
        let budget = max_len - degree;
        let mut cells = vec![0; degree];
        let mut powers = vec![0; degree];
        for flat in 0..m.pow(degree as u32) {
            decode(m, flat, &mut cells);
            for pflat in 0..(budget + 1).pow(degree as u32) {
                decode(budget + 1, pflat, &mut powers);
                if powers.iter().sum::<usize>() > budget {
                    continue;
                }
                let factors: Vec<_> = cells
                    .iter()
                    .zip(&powers)
                    .map(|(&c, &l)| space.lift_monomial(&FockTensor::unit(m, c), l))
                    .collect();
                let t = symmetrize(pk, &FockTensor::tensor_all(pk.sites(), &factors));
                targets.push(GradedVector::from_tensor_unchecked(t, cutoff));
            }
        }
    }
    targets
}

/// Compares the span of vacuum words of length `≤ L` with the symmetrized
/// monomial family of total order `≤ L`, and searches word lengths up to the
/// cutoff for one whose span contains the whole family.
pub fn cyclicity_rank(space: &LevySpace, max_len: usize, cutoff: usize) -> Result<CyclicityReport> {
    if max_len > cutoff {
        return Err(Error::WordTooLong {
            len: max_len,
            cutoff,
        });
    }
    let w = space.product.weights();
    let by_len = word_vectors(space, cutoff, cutoff);
    let targets = target_vectors(space, max_len, cutoff);
    let mut words: Vec<GradedVector> = by_len[..=max_len].concat();
    let achieved = gram_rank(&words, w);
    let target = gram_rank(&targets, w);
    let mut all = words.clone();
    all.extend(targets.iter().cloned());
    let joint = gram_rank(&all, w);

    let mut covering_len = None;
    for len in max_len..=cutoff {
        if len > max_len {
            words.extend(by_len[len].iter().cloned());
        }
        let rank = gram_rank(&words, w);
        let mut with = words.clone();
        with.extend(targets.iter().cloned());
        if gram_rank(&with, w) == rank {
            covering_len = Some(len);
            break;
        }
    }
    Ok(CyclicityReport {
        achieved,
        target,
        joint,
        covering_len,
    })
}

/// Index of the product cell `(i, j)`.
pub fn product_index(space: &LevySpace, i: usize, j: usize) -> usize {
    encode(space.jumps.len(), &[i, j])
}
