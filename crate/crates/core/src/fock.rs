//! The truncated Q-Fock space and its creation, annihilation and neutral operators.

use std::ops::{Add, Mul, Sub};
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::QKernel;
use crate::symmetrize::{create_symmetric, q_number, symmetrize, symmetry_defect, SYMMETRY_TOL};
use crate::tensor::{decode, encode, FockTensor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Element of the Fock space truncated at particle number `cutoff`: one
/// Q-symmetric tensor per degree `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedVector {
    m: usize,
    components: Vec<FockTensor>,
}

impl GradedVector {
    pub fn zeros(m: usize, cutoff: usize) -> Self {
        Self {
            m,
            components: (0..=cutoff).map(|n| FockTensor::zeros(m, n)).collect(),
        }
    }

    /// The vacuum `Ω`.
    pub fn vacuum(m: usize, cutoff: usize) -> Self {
        let mut v = Self::zeros(m, cutoff);
        v.components[0].data_mut()[0] = ONE;
        v
    }

    /// Vector with a single Q-symmetric component.
    pub fn from_tensor(k: &QKernel, f: FockTensor, cutoff: usize) -> Result<Self> {
        if f.degree() > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                required: f.degree(),
            });
        }
        let defect = symmetry_defect(k, &f);
        if defect > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { defect });
        }
        Ok(Self::from_tensor_unchecked(f, cutoff))
    }

    pub(crate) fn from_tensor_unchecked(f: FockTensor, cutoff: usize) -> Self {
        let mut v = Self::zeros(f.m(), cutoff);
        let n = f.degree();
        v.components[n] = f;
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cutoff(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, n: usize) -> &FockTensor {
        &self.components[n]
    }

    pub fn components(&self) -> &[FockTensor] {
        &self.components
    }

    /// Coefficient of `Ω`.
    pub fn vacuum_part(&self) -> Complex64 {
        self.components[0].data()[0]
    }

    /// `Σ_n n! ⟨f_n, g_n⟩`.
    pub fn inner(&self, other: &Self, weights: &[f64]) -> Complex64 {
        self.components
            .iter()
            .zip(&other.components)
            .enumerate()
            .map(|(n, (a, b))| a.inner(b, weights) * factorial(n))
            .sum()
    }

    pub fn norm_sqr(&self, weights: &[f64]) -> f64 {
        self.inner(self, weights).re
    }

    pub fn add_scaled(&mut self, c: Complex64, other: &Self) {
        for (a, b) in self.components.iter_mut().zip(&other.components) {
            a.add_scaled(c, b);
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            m: self.m,
            components: self.components.iter().map(|t| t.scaled(c)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components
            .iter()
            .map(|t| t.max_abs())
            .fold(0.0, f64::max)
    }

    /// Largest Q-symmetry defect over all components.
    pub fn symmetry_defect(&self, k: &QKernel) -> f64 {
        self.components
            .iter()
            .map(|t| symmetry_defect(k, t))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Create(FockTensor),
    Annihilate(FockTensor),
    Neutral(FockTensor),
    Identity,
    Sum(Vec<(Complex64, Node)>),
    /// Applied right to left, like a written operator product.
    Product(Vec<Node>),
}

/// Linear map on the truncated Fock space, held as an expression over
/// creation, annihilation and neutral operators.
#[derive(Debug, Clone)]
pub struct GradedOperator {
    kernel: Arc<QKernel>,
    cutoff: usize,
    node: Node,
}

impl GradedOperator {
    fn leaf(kernel: &Arc<QKernel>, cutoff: usize, node: Node) -> Self {
        Self {
            kernel: Arc::clone(kernel),
            cutoff,
            node,
        }
    }

    pub fn identity(kernel: &Arc<QKernel>, cutoff: usize) -> Self {
        Self::leaf(kernel, cutoff, Node::Identity)
    }

    pub fn zero(kernel: &Arc<QKernel>, cutoff: usize) -> Self {
        Self::leaf(kernel, cutoff, Node::Sum(Vec::new()))
    }

    pub fn kernel(&self) -> &Arc<QKernel> {
        &self.kernel
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.cutoff == other.cutoff
                && (Arc::ptr_eq(&self.kernel, &other.kernel) || *self.kernel == *other.kernel),
            "operators live on different Fock spaces"
        );
    }

    /// `c · A`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self::leaf(
            &self.kernel,
            self.cutoff,
            Node::Sum(vec![(c, self.node.clone())]),
        )
    }

    /// `Σ c_i A_i`; all operators must share kernel and cutoff.
    pub fn linear_combination(terms: &[(Complex64, &GradedOperator)]) -> Self {
        let first = terms.first().expect("at least one term").1;
        for (_, op) in terms {
            first.check_compatible(op);
        }
        Self::leaf(
            &first.kernel,
            first.cutoff,
            Node::Sum(terms.iter().map(|(c, op)| (*c, op.node.clone())).collect()),
        )
    }

    /// Operator product `A_1 A_2 ⋯ A_n` (the rightmost factor acts first).
    pub fn product(factors: &[&GradedOperator]) -> Self {
        let first = factors.first().expect("at least one factor");
        for op in factors {
            first.check_compatible(op);
        }
        Self::leaf(
            &first.kernel,
            first.cutoff,
            Node::Product(factors.iter().map(|op| op.node.clone()).collect()),
        )
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        assert_eq!(
            v.cutoff(),
            self.cutoff,
            "vector and operator cutoffs differ"
        );
        apply_node(&self.kernel, &self.node, v)
    }

    /// `(A Ω)`.
    pub fn on_vacuum(&self) -> GradedVector {
        self.apply(&GradedVector::vacuum(self.kernel.sites(), self.cutoff))
    }

    /// Largest entry of `A v − B v` over the symmetric spanning vectors of
    /// every degree up to `max_degree`.
    pub fn max_difference(&self, other: &Self, max_degree: usize) -> f64 {
        self.check_compatible(other);
        let mut worst: f64 = 0.0;
        for n in 0..=max_degree.min(self.cutoff) {
            for f in symmetric_spanning_set(&self.kernel, n) {
                let v = GradedVector::from_tensor_unchecked(f, self.cutoff);
                worst = worst.max(self.apply(&v).max_abs_diff(&other.apply(&v)));
            }
        }
        worst
    }

    /// Largest entry of `A v` over the spanning vectors of degrees up to `max_degree`.
    pub fn max_entry(&self, max_degree: usize) -> f64 {
        let zero = GradedOperator::zero(&self.kernel, self.cutoff);
        self.max_difference(&zero, max_degree)
    }
}

impl Add for &GradedOperator {
    type Output = GradedOperator;
    fn add(self, rhs: &GradedOperator) -> GradedOperator {
        GradedOperator::linear_combination(&[(ONE, self), (ONE, rhs)])
    }
}

impl Sub for &GradedOperator {
    type Output = GradedOperator;
    fn sub(self, rhs: &GradedOperator) -> GradedOperator {
        GradedOperator::linear_combination(&[(ONE, self), (-ONE, rhs)])
    }
}

impl Mul for &GradedOperator {
    type Output = GradedOperator;
    fn mul(self, rhs: &GradedOperator) -> GradedOperator {
        GradedOperator::product(&[self, rhs])
    }
}

fn apply_node(k: &QKernel, node: &Node, v: &GradedVector) -> GradedVector {
    let m = v.m;
    let cutoff = v.cutoff();
    match node {
        Node::Identity => v.clone(),
        Node::Create(h) => {
            let mut out = GradedVector::zeros(m, cutoff);
            for n in 0..cutoff {
                out.components[n + 1] = create_symmetric(k, h, &v.components[n]);
            }
            out
        }
        Node::Annihilate(h) => {
            let mut out = GradedVector::zeros(m, cutoff);
            let w = k.weights();
            for n in 1..=cutoff {
                let f = &v.components[n];
                let target = &mut out.components[n - 1];
                let block = target.len();
                for s in 0..m {
                    let c = h.data()[s].conj() * w[s] * n as f64;
                    if c == ZERO {
                        continue;
                    }
                    let src = &f.data()[s * block..(s + 1) * block];
                    for (a, b) in target.data_mut().iter_mut().zip(src) {
                        *a += c * b;
                    }
                }
            }
            out
        }
        Node::Neutral(h) => {
            let mut out = GradedVector::zeros(m, cutoff);
            for n in 1..=cutoff {
                let f = &v.components[n];
                let mut idx = vec![0; n];
                let target = out.components[n].data_mut();
                for (flat, value) in f.data().iter().enumerate() {
                    decode(m, flat, &mut idx);
                    let mult: Complex64 = idx.iter().map(|&i| h.data()[i]).sum();
                    target[flat] = mult * value;
                }
            }
            out
        }
        Node::Sum(terms) => {
            let mut out = GradedVector::zeros(m, cutoff);
            for (c, term) in terms {
                out.add_scaled(*c, &apply_node(k, term, v));
            }
            out
        }
        Node::Product(factors) => factors
            .iter()
            .rev()
            .fold(v.clone(), |acc, f| apply_node(k, f, &acc)),
    }
}

fn check_test_function(k: &QKernel, h: &FockTensor) {
    assert!(
        h.degree() == 1 && h.m() == k.sites(),
        "test function must be a degree-1 tensor over the kernel's grid"
    );
}

/// `a⁺(h)`: degree `n` goes to `h ⊛ f` in degree `n + 1`; the top degree is cut off.
pub fn create(k: &Arc<QKernel>, h: &FockTensor, cutoff: usize) -> GradedOperator {
    check_test_function(k, h);
    GradedOperator::leaf(k, cutoff, Node::Create(h.clone()))
}

/// `a⁻(h)`: `n Σ_s conj(h(s)) f(s, t_1, …, t_{n−1}) σ_s`.
pub fn annihilate(k: &Arc<QKernel>, h: &FockTensor, cutoff: usize) -> GradedOperator {
    check_test_function(k, h);
    GradedOperator::leaf(k, cutoff, Node::Annihilate(h.clone()))
}

/// `a⁰(h)`: multiplies degree `n` by `h(t_1) + … + h(t_n)`.
pub fn neutral(k: &Arc<QKernel>, h: &FockTensor, cutoff: usize) -> GradedOperator {
    check_test_function(k, h);
    GradedOperator::leaf(k, cutoff, Node::Neutral(h.clone()))
}

/// Discrete delta at cell `i`: the tensor `e_i / σ_i`.
pub fn delta(k: &QKernel, i: usize) -> FockTensor {
    FockTensor::unit(k.sites(), i).scaled(Complex64::new(1.0 / k.weights()[i], 0.0))
}

/// Point creator and annihilator `(∂†_i, ∂_i)`.
pub fn point_operators(
    k: &Arc<QKernel>,
    i: usize,
    cutoff: usize,
) -> (GradedOperator, GradedOperator) {
    let d = delta(k, i);
    (create(k, &d, cutoff), annihilate(k, &d, cutoff))
}

/// `P_n(e_{i_1} ⊗ … ⊗ e_{i_n})` over nondecreasing index tuples; these span
/// the degree-`n` Q-symmetric subspace.
pub fn symmetric_spanning_set(k: &QKernel, n: usize) -> Vec<FockTensor> {
    let m = k.sites();
    let mut out = Vec::new();
    let mut idx = vec![0; n];
    let total = crate::tensor::tensor_len(m, n).expect("degree within envelope");
    for flat in 0..total {
        decode(m, flat, &mut idx);
        if idx.windows(2).all(|w| w[0] <= w[1]) {
            out.push(symmetrize(k, &FockTensor::basis(m, &idx)));
        }
    }
    out
}

/// Random graded vector with Q-symmetric components in degrees `0..=max_degree`.
pub fn random_symmetric_vector<R: Rng + ?Sized>(
    k: &QKernel,
    cutoff: usize,
    max_degree: usize,
    rng: &mut R,
) -> GradedVector {
    let m = k.sites();
    let mut v = GradedVector::zeros(m, cutoff);
    for n in 0..=max_degree.min(cutoff) {
        let mut t = FockTensor::zeros(m, n);
        for z in t.data_mut() {
            *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        v.components[n] = symmetrize(k, &t);
    }
    v
}

/// Residuals of the three Q-commutation relations over all cell pairs,
/// measured on degrees `0..=cutoff−2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcrReport {
    /// `∂_i ∂†_j − Q(i,j) ∂†_j ∂_i − δ_{ij}/σ_i`.
    pub mixed: f64,
    /// `∂_i ∂_j − Q(j,i) ∂_j ∂_i`.
    pub annihilators: f64,
    /// `∂†_i ∂†_j − Q(j,i) ∂†_j ∂†_i`.
    pub creators: f64,
    pub guarded_degree: usize,
}

impl CcrReport {
    pub fn max_residual(&self) -> f64 {
        self.mixed.max(self.annihilators).max(self.creators)
    }
}

pub fn check_ccr(k: &Arc<QKernel>, cutoff: usize) -> Result<CcrReport> {
    if cutoff < 3 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: 3,
        });
    }
    let m = k.sites();
    let guarded = cutoff - 2;
    let points: Vec<_> = (0..m).map(|i| point_operators(k, i, cutoff)).collect();
    let id = GradedOperator::identity(k, cutoff);
    let mut report = CcrReport {
        mixed: 0.0,
        annihilators: 0.0,
        creators: 0.0,
        guarded_degree: guarded,
    };
    for i in 0..m {
        for j in 0..m {
            let (ci, ai) = &points[i];
            let (cj, aj) = &points[j];
            let delta_term = if i == j { 1.0 / k.weights()[i] } else { 0.0 };
            let mixed = GradedOperator::linear_combination(&[
                (ONE, &(ai * cj)),
                (-k.q(i, j), &(cj * ai)),
                (Complex64::new(-delta_term, 0.0), &id),
            ]);
            let ann =
                GradedOperator::linear_combination(&[(ONE, &(ai * aj)), (-k.q(j, i), &(aj * ai))]);
            let cre =
                GradedOperator::linear_combination(&[(ONE, &(ci * cj)), (-k.q(j, i), &(cj * ci))]);
            report.mixed = report.mixed.max(mixed.max_entry(guarded));
            report.annihilators = report.annihilators.max(ann.max_entry(guarded));
            report.creators = report.creators.max(cre.max_entry(guarded));
        }
    }
    Ok(report)
}

/// `Σ_{i,j} Q(i,j) f(i) conj(f(j)) σ_i σ_j` with the kernel read cellwise.
pub fn negdef_form(k: &QKernel, f: &FockTensor) -> Complex64 {
    let m = k.sites();
    let w = k.weights();
    let mut acc = ZERO;
    for i in 0..m {
        for j in 0..m {
            acc += k.q(i, j) * f.data()[i] * f.data()[j].conj() * w[i] * w[j];
        }
    }
    acc
}

/// The same form with each cell read as a continuum interval: pairs of
/// points inside one cell contribute the kernel's intra-cell mean instead of
/// `Q(i,i) = 1`. Requires a kernel family whose intra-cell law is known.
pub fn negdef_form_continuum(k: &QKernel, f: &FockTensor) -> Result<Complex64> {
    let mean = k.intra_cell_mean().ok_or_else(|| {
        Error::Precondition("a kernel with a known intra-cell law (anyonic)".into())
    })?;
    let w = k.weights();
    let mut acc = negdef_form(k, f);
    for i in 0..k.sites() {
        acc += (mean - 1.0) * f.data()[i].norm_sqr() * w[i] * w[i];
    }
    Ok(acc)
}

/// Test vector `(b/a) conj(q) χ_{Δ₁} + χ_{Δ₂}` for cells `Δ₁` before `Δ₂`,
/// with `a = σ(Δ₁)`, `b = σ(Δ₂)`. Its continuum form equals `2b²(Re q + 1)`.
pub fn negdef_test_vector(k: &QKernel, first: usize, second: usize) -> Result<FockTensor> {
    let q = k.anyonic_q().ok_or(Error::NotAnyonic)?;
    if first >= second || second >= k.sites() {
        return Err(Error::Precondition(format!(
            "cells {first} < {second} inside a grid of {}",
            k.sites()
        )));
    }
    let (a, b) = (k.weights()[first], k.weights()[second]);
    let mut g = FockTensor::zeros(k.sites(), 1);
    g.data_mut()[first] = q.conj() * (b / a);
    g.data_mut()[second] = ONE;
    Ok(g)
}

/// Largest eigenvalue of the Hermitian matrix of the (literal or continuum)
/// form. The form is negative semidefinite exactly when this is `≤ 0`.
pub fn negdef_max_eigenvalue(k: &QKernel, continuum: bool) -> Result<f64> {
    let m = k.sites();
    let w = k.weights();
    let diag = if continuum {
        Complex64::new(
            k.intra_cell_mean().ok_or_else(|| {
                Error::Precondition("a kernel with a known intra-cell law (anyonic)".into())
            })?,
            0.0,
        )
    } else {
        ONE
    };
    let mat = DMatrix::from_fn(m, m, |i, j| {
        let q = if i == j { diag } else { k.q(i, j) };
        q * w[i] * w[j]
    });
    let eig = SymmetricEigen::new(mat);
    Ok(eig
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Norm of `a⁺(χ_Δ)` restricted to `span{Ω, χ_Δ^{⊛n}}`, by closed form and
/// by power iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedNorm {
    pub closed_form: f64,
    pub power_iteration: f64,
    pub bound: f64,
    /// Particle number at which the closed-form supremum is attained.
    pub argmax: usize,
}

/// `‖χ_Δ^{⊛n}‖² = σ(Δ)^n |[n]_q!|² / n!` for `n = 0..=n_max`, reading `Δ` as
/// an interval on which the anyonic kernel orders points.
pub fn chi_power_gram(q: Complex64, delta_mass: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut g = 1.0;
    out.push(g);
    for n in 1..=n_max {
        g *= delta_mass * q_number(q, n).norm_sqr() / n as f64;
        out.push(g);
    }
    out
}

pub fn restricted_creation_norm(
    q: Complex64,
    delta_mass: f64,
    n_max: usize,
) -> Result<RestrictedNorm> {
    let defect = (q.norm() - 1.0).abs();
    if defect > crate::kernel::KERNEL_TOL {
        return Err(Error::NotUnimodular {
            re: q.re,
            im: q.im,
            defect,
        });
    }
    if (q - ONE).norm() <= 1e-12 {
        return Err(Error::BosonCase);
    }
    if !(delta_mass > 0.0) || n_max == 0 {
        return Err(Error::Precondition(
            "positive cell mass and n_max ≥ 1".into(),
        ));
    }
    let (mut closed_form, mut argmax) = (0.0, 1);
    for n in 1..=n_max {
        let v = q_number(q, n).norm() / (n as f64).sqrt() * delta_mass.sqrt();
        if v > closed_form + 1e-15 {
            closed_form = v;
            argmax = n;
        }
    }
    let bound = 2.0 / (ONE - q).norm() * delta_mass.sqrt();

    // In the orthonormalized basis u_n ∝ χ^{⊛n} the operator is a weighted
    // shift u_{n−1} ↦ r_n u_n with r_n = sqrt(G_n / G_{n−1}).
    let gram = chi_power_gram(q, delta_mass, n_max);
    let mut shift = vec![0.0; n_max + 1];
    for n in 1..=n_max {
        if gram[n - 1] <= 1e-300 {
            break;
        }
        shift[n] = (gram[n] / gram[n - 1]).sqrt();
    }
    let power_iteration = power_iteration_norm(&shift);
    Ok(RestrictedNorm {
        closed_form,
        power_iteration,
        bound,
        argmax,
    })
}

/// Largest singular value of the weighted shift `u_{n−1} ↦ r_n u_n` by
/// power iteration on `AᵀA`.
fn power_iteration_norm(shift: &[f64]) -> f64 {
    let dim = shift.len();
    let apply = |x: &[f64]| -> Vec<f64> {
        let mut y = vec![0.0; dim];
        for n in 1..dim {
            y[n] = shift[n] * x[n - 1];
        }
        y
    };
    let apply_t = |y: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; dim];
        for n in 1..dim {
            x[n - 1] = shift[n] * y[n];
        }
        x
    };
    let mut x: Vec<f64> = (0..dim).map(|i| 1.0 + 0.01 * i as f64).collect();
    let mut rayleigh = 0.0;
    for _ in 0..20_000 {
        let z = apply_t(&apply(&x));
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let xx: f64 = x.iter().map(|v| v * v).sum();
        let next = x.iter().zip(&z).map(|(a, b)| a * b).sum::<f64>() / xx;
        x = z.iter().map(|v| v / norm).collect();
        if (next - rayleigh).abs() <= 1e-16 * next.abs() {
            rayleigh = next;
            break;
        }
        rayleigh = next;
    }
    rayleigh.sqrt()
}

/// `Σ_i σ_i h(i) ∂†_i`, built from point operators.
pub fn smeared_creator(k: &Arc<QKernel>, h: &FockTensor, cutoff: usize) -> GradedOperator {
    let ops: Vec<_> = (0..k.sites())
        .map(|i| point_operators(k, i, cutoff).0)
        .collect();
    let terms: Vec<_> = ops
        .iter()
        .enumerate()
        .map(|(i, op)| (h.data()[i] * k.weights()[i], op))
        .collect();
    GradedOperator::linear_combination(&terms)
}

/// Reads the tensor entry `f(idx)` of degree `idx.len()` from a graded vector.
pub fn entry(v: &GradedVector, idx: &[usize]) -> Complex64 {
    v.component(idx.len()).data()[encode(v.m(), idx)]
}
