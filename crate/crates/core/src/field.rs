//! The field `ω = ∂† + λ∂†∂ + ∂`, its vacuum state, Wick polynomials,
//! normal ordering and the Wick product rule.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{
    annihilate, create, delta, neutral, point_operators, GradedOperator, GradedVector,
};
use crate::kernel::QKernel;
use crate::partitions::{enumerate_marked, for_each_assignment, marked_crossing_coeff, spread};
use crate::symmetrize::symmetrize;
use crate::tensor::{encode, FockTensor};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Kernel, Poisson parameter `λ` and particle cutoff of a field.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub kernel: Arc<QKernel>,
    pub lambda: f64,
    pub cutoff: usize,
}

impl FieldConfig {
    pub fn new(kernel: QKernel, lambda: f64, cutoff: usize) -> Result<Self> {
        Self::from_arc(Arc::new(kernel), lambda, cutoff)
    }

    pub fn from_arc(kernel: Arc<QKernel>, lambda: f64, cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall {
                cutoff,
                required: 2,
            });
        }
        if !lambda.is_finite() {
            return Err(Error::Precondition("finite lambda".into()));
        }
        Ok(Self {
            kernel,
            lambda,
            cutoff,
        })
    }

    pub fn sites(&self) -> usize {
        self.kernel.sites()
    }

    pub fn weights(&self) -> &[f64] {
        self.kernel.weights()
    }
}

/// Word `⟨f_1,ω⟩⋯⟨f_n,ω⟩` given by its degree-1 test functions.
pub type OperatorWord = Vec<FockTensor>;

/// `⟨f,ω⟩ = a⁺(f) + λ a⁰(f) + a⁻(f)`.
pub fn omega(cfg: &FieldConfig, f: &FockTensor) -> GradedOperator {
    let k = &cfg.kernel;
    GradedOperator::linear_combination(&[
        (ONE, &create(k, f, cfg.cutoff)),
        (Complex64::new(cfg.lambda, 0.0), &neutral(k, f, cfg.cutoff)),
        (ONE, &annihilate(k, f, cfg.cutoff)),
    ])
}

/// `ω(t_i)`, the field smeared with the discrete delta at cell `i`.
pub fn omega_at(cfg: &FieldConfig, i: usize) -> GradedOperator {
    omega(cfg, &delta(&cfg.kernel, i))
}

/// `⟨f_1,ω⟩⋯⟨f_n,ω⟩ Ω`.
pub fn word_vector(cfg: &FieldConfig, word: &[FockTensor]) -> Result<GradedVector> {
    if word.len() > cfg.cutoff {
        return Err(Error::WordTooLong {
            len: word.len(),
            cutoff: cfg.cutoff,
        });
    }
    let mut v = GradedVector::vacuum(cfg.sites(), cfg.cutoff);
    for f in word.iter().rev() {
        v = omega(cfg, f).apply(&v);
    }
    Ok(v)
}

/// `τ(⟨f_1,ω⟩⋯⟨f_n,ω⟩) = (⟨f_1,ω⟩⋯⟨f_n,ω⟩Ω, Ω)`.
pub fn vacuum_state(word: &[FockTensor], cfg: &FieldConfig) -> Result<Complex64> {
    Ok(word_vector(cfg, word)?.vacuum_part())
}

/// `|τ(w₁w₂) − τ(w₂w₁)|`.
pub fn traciality_defect(cfg: &FieldConfig, w1: &[FockTensor], w2: &[FockTensor]) -> Result<f64> {
    let joined: Vec<_> = w1.iter().chain(w2).cloned().collect();
    let swapped: Vec<_> = w2.iter().chain(w1).cloned().collect();
    Ok((vacuum_state(&joined, cfg)? - vacuum_state(&swapped, cfg)?).norm())
}

/// Fock vector of `⟨f, :ω^{⊗n}:⟩`, i.e. `P_n f`.
pub fn wick_polynomial_vector(cfg: &FieldConfig, f: &FockTensor) -> Result<FockTensor> {
    if f.degree() > cfg.cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff: cfg.cutoff,
            required: f.degree(),
        });
    }
    Ok(symmetrize(&cfg.kernel, f))
}

/// `:ω(t_{i_1})⋯ω(t_{i_n}):` built by the three-term recurrence, with
/// `δ(s,t)` read as `[s = t]/σ_s` and `Q(t,t) = 1`.
pub fn wick_recurrence_apply(cfg: &FieldConfig, idx: &[usize]) -> Result<GradedOperator> {
    if idx.len() > cfg.cutoff {
        return Err(Error::WordTooLong {
            len: idx.len(),
            cutoff: cfg.cutoff,
        });
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= cfg.sites()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            valid: format!("0..{}", cfg.sites()),
        });
    }
    Ok(recurrence(cfg, idx))
}

fn recurrence(cfg: &FieldConfig, idx: &[usize]) -> GradedOperator {
    let k = &cfg.kernel;
    if idx.is_empty() {
        return GradedOperator::identity(k, cfg.cutoff);
    }
    let rest = recurrence(cfg, &idx[1..]);
    let head = omega_at(cfg, idx[0]);
    let lead = &head * &rest;
    let mut owned: Vec<(Complex64, GradedOperator)> = vec![(ONE, lead)];
    let s = idx[0];
    let inv_sigma = 1.0 / k.weights()[s];
    let mut prefix = ONE;
    for i in 1..idx.len() {
        if idx[i] == s {
            owned.push((Complex64::new(-cfg.lambda * inv_sigma, 0.0), rest.clone()));
            let mut reduced = idx[1..].to_vec();
            reduced.remove(i - 1);
            owned.push((-prefix * inv_sigma, recurrence(cfg, &reduced)));
        }
        prefix *= k.q(s, idx[i]);
    }
    let terms: Vec<_> = owned.iter().map(|(c, op)| (*c, op)).collect();
    GradedOperator::linear_combination(&terms)
}

/// Normal-ordered form of `ω(t_{i_1})⋯ω(t_{i_n})`: expand every factor into
/// `∂† + λ∂†∂ + ∂`, move all creators to the left by `∂_s∂†_t ↦ Q(s,t)∂†_t∂_s`
/// and drop the delta terms. At `λ = 0` this is the bipartition sum
/// `Σ_{(I,J)} Q_{I,J} ∂†_I ∂_J`.
pub fn normal_order_product(cfg: &FieldConfig, idx: &[usize]) -> Result<GradedOperator> {
    let n = idx.len();
    if n > cfg.cutoff {
        return Err(Error::WordTooLong {
            len: n,
            cutoff: cfg.cutoff,
        });
    }
    let k = &cfg.kernel;
    let points: Vec<_> = (0..k.sites())
        .map(|i| point_operators(k, i, cfg.cutoff))
        .collect();
    let mut terms: Vec<(Complex64, GradedOperator)> = Vec::new();
    // letter 0 = ∂†, 1 = λ∂†∂, 2 = ∂
    let letters = if cfg.lambda == 0.0 { 2usize } else { 3 };
    let total = letters.pow(n as u32);
    let mut word = vec![0usize; n];
    for flat in 0..total {
        let mut rem = flat;
        for slot in word.iter_mut().rev() {
            let l = rem % letters;
            rem /= letters;
            *slot = if letters == 2 && l == 1 { 2 } else { l };
        }
        let creators: Vec<usize> = (0..n).filter(|&p| word[p] <= 1).collect();
        let annihilators: Vec<usize> = (0..n).filter(|&p| word[p] >= 1).collect();
        let mut coeff = Complex64::new(
            cfg.lambda
                .powi(word.iter().filter(|&&l| l == 1).count() as i32),
            0.0,
        );
        for &a in &annihilators {
            for &b in &creators {
                if a < b {
                    coeff *= k.q(idx[a], idx[b]);
                }
            }
        }
        let mut factors: Vec<&GradedOperator> =
            creators.iter().map(|&p| &points[idx[p]].0).collect();
        factors.extend(annihilators.iter().map(|&p| &points[idx[p]].1));
        let op = if factors.is_empty() {
            GradedOperator::identity(k, cfg.cutoff)
        } else {
            GradedOperator::product(&factors)
        };
        terms.push((coeff, op));
    }
    let refs: Vec<_> = terms.iter().map(|(c, op)| (*c, op)).collect();
    Ok(GradedOperator::linear_combination(&refs))
}

/// Outcome of comparing the Wick recurrence with normal ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct WickNormalReport {
    /// Largest residual over all tested index tuples.
    pub residual: f64,
    /// Index tuple with the largest residual.
    pub worst: Vec<usize>,
    /// Whether equality is expected for this kernel and λ.
    pub expect_equal: bool,
}

/// Compares `:ω(t_{i_1})⋯ω(t_{i_n}):` from the recurrence with the
/// normal-ordered product over every index tuple of length `n`, on the
/// degrees `0..=cutoff−n`.
pub fn wick_vs_normal_report(cfg: &FieldConfig, n: usize) -> Result<WickNormalReport> {
    if n == 0 || n >= cfg.cutoff {
        return Err(Error::CutoffTooSmall {
            cutoff: cfg.cutoff,
            required: n + 1,
        });
    }
    let m = cfg.sites();
    let guarded = cfg.cutoff - n;
    let mut report = WickNormalReport {
        residual: 0.0,
        worst: Vec::new(),
        expect_equal: cfg.kernel.is_real_valued()
            && (cfg.lambda == 0.0 || cfg.kernel.is_identically_one()),
    };
    let mut idx = vec![0; n];
    for flat in 0..m.pow(n as u32) {
        crate::tensor::decode(m, flat, &mut idx);
        let a = wick_recurrence_apply(cfg, &idx)?;
        let b = normal_order_product(cfg, &idx)?;
        let r = a.max_difference(&b, guarded);
        if report.worst.is_empty() || r > report.residual {
            report.residual = r;
            report.worst = idx.clone();
        }
    }
    Ok(report)
}

/// The marked-partition expansion of `⟨f_1,ω⟩⋯⟨f_n,ω⟩Ω` next to the direct
/// operator product.
#[derive(Debug, Clone, PartialEq)]
pub struct WickExpansion {
    pub expansion: GradedVector,
    pub operator_product: GradedVector,
    pub terms: usize,
    pub residual: f64,
}

pub fn wick_rule_expand(cfg: &FieldConfig, fs: &[FockTensor]) -> Result<WickExpansion> {
    let n = fs.len();
    if n > cfg.cutoff {
        return Err(Error::WordTooLong {
            len: n,
            cutoff: cfg.cutoff,
        });
    }
    let k = &cfg.kernel;
    let m = k.sites();
    let w = k.weights();
    let marked = enumerate_marked(n)?;
    let mut raw: Vec<FockTensor> = (0..=n).map(|r| FockTensor::zeros(m, r)).collect();
    let mut idx = vec![0; n];
    let mut out_idx = Vec::with_capacity(n);
    for v in &marked {
        let blocks = v.blocks();
        let kept = v.kept_blocks();
        let block_of = v.partition().block_of();
        let mut lam = 1.0;
        for (b, block) in blocks.iter().enumerate() {
            let e = if v.marks()[b] == 1 {
                block.len() - 1
            } else {
                block.len() - 2
            };
            lam *= cfg.lambda.powi(e as i32);
        }
        if lam == 0.0 {
            continue;
        }
        let r = kept.len();
        for_each_assignment(m, blocks.len(), |cells| {
            let mut value = Complex64::new(lam, 0.0);
            for (b, block) in blocks.iter().enumerate() {
                let s = cells[b];
                if v.marks()[b] == -1 {
                    value *= w[s];
                }
                for &i in block {
                    value *= fs[i].data()[s];
                }
            }
            if value == ZERO {
                return;
            }
            spread(&block_of, cells, &mut idx);
            value *= marked_crossing_coeff(k, v, &idx);
            out_idx.clear();
            out_idx.extend(kept.iter().map(|&b| cells[b]));
            raw[r].data_mut()[encode(m, &out_idx)] += value;
        });
    }
    let mut expansion = GradedVector::zeros(m, cfg.cutoff);
    for t in &raw {
        let sym = GradedVector::from_tensor(k, symmetrize(k, t), cfg.cutoff)?;
        expansion.add_scaled(ONE, &sym);
    }
    let operator_product = word_vector(cfg, fs)?;
    let residual = expansion.max_abs_diff(&operator_product);
    Ok(WickExpansion {
        expansion,
        operator_product,
        terms: marked.len(),
        residual,
    })
}

/// Moment tensors `m_n(i_1,…,i_n) = τ(X_{i_1}⋯X_{i_n})` for `n = 1..=n_max`,
/// where `cell_ops[i]` is the field smeared with the indicator of cell `i`.
pub fn moment_tensors(cell_ops: &[GradedOperator], n_max: usize) -> Result<Vec<FockTensor>> {
    let first = cell_ops
        .first()
        .ok_or_else(|| Error::Precondition("at least one cell operator".into()))?;
    let cutoff = first.cutoff();
    if n_max > cutoff {
        return Err(Error::WordTooLong { len: n_max, cutoff });
    }
    let m = cell_ops.len();
    let dim = first.kernel().sites();
    let mut out: Vec<FockTensor> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        out.push(FockTensor::try_zeros(m, n)?);
    }
    // depth-first over words, prepending one letter at a time
    fn visit(
        ops: &[GradedOperator],
        v: &GradedVector,
        suffix: &mut Vec<usize>,
        n_max: usize,
        out: &mut [FockTensor],
    ) {
        for (i, op) in ops.iter().enumerate() {
            let next = op.apply(v);
            suffix.insert(0, i);
            let n = suffix.len();
            let m = ops.len();
            out[n - 1].data_mut()[encode(m, suffix)] = next.vacuum_part();
            if n < n_max {
                visit(ops, &next, suffix, n_max, out);
            }
            suffix.remove(0);
        }
    }
    if n_max > 0 {
        let vacuum = GradedVector::vacuum(dim, cutoff);
        visit(cell_ops, &vacuum, &mut Vec::new(), n_max, &mut out);
    }
    Ok(out)
}

/// `⟨χ_i, ω⟩` for every cell.
pub fn cell_fields(cfg: &FieldConfig) -> Vec<GradedOperator> {
    (0..cfg.sites())
        .map(|i| omega(cfg, &FockTensor::unit(cfg.sites(), i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_anyonic_kernel, random_kernel, random_sign_kernel, SiteGrid};
    use crate::partitions::{cumulants_from_moments, moment_formula};
    use crate::symmetrize::q_product;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid(m: usize) -> SiteGrid {
        SiteGrid::new(
            (0..m).map(|i| i as f64).collect(),
            (0..m).map(|i| 0.5 + 0.4 * i as f64).collect(),
        )
        .unwrap()
    }

    fn real_fn(rng: &mut ChaCha8Rng, m: usize) -> FockTensor {
        FockTensor::real_vector(&(0..m).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())
    }

    #[test]
    fn omega_on_vacuum_and_second_moment() {
        let cfg =
            FieldConfig::new(build_anyonic_kernel(grid(3), c(0.0, 1.0)).unwrap(), 0.0, 3).unwrap();
        let f = FockTensor::real_vector(&[1.0, 2.0, -1.0]);
        let g = FockTensor::real_vector(&[0.5, 0.0, 3.0]);
        assert_eq!(omega(&cfg, &f).on_vacuum().component(1), &f);
        let v = word_vector(&cfg, &[f.clone(), f.clone()]).unwrap();
        assert!((v.vacuum_part() - f.inner(&f, cfg.weights())).norm() < 1e-14);
        assert_eq!(vacuum_state(&[f.clone()], &cfg).unwrap(), ZERO);
        let expected: f64 = (0..3)
            .map(|i| f.data()[i].re * g.data()[i].re * cfg.weights()[i])
            .sum();
        assert!((vacuum_state(&[f.clone(), g], &cfg).unwrap() - c(expected, 0.0)).norm() < 1e-14);
        let long = vec![f; 4];
        assert!(matches!(
            vacuum_state(&long, &cfg),
            Err(Error::WordTooLong { .. })
        ));
    }

    #[test]
    fn omega_is_symmetric_for_real_f() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let k = random_kernel(grid(3), &mut rng);
        let cfg = FieldConfig::new(k, 0.8, 4).unwrap();
        let f = real_fn(&mut rng, 3);
        let op = omega(&cfg, &f);
        let w = cfg.weights().to_vec();
        for _ in 0..4 {
            let a = crate::fock::random_symmetric_vector(&cfg.kernel, 4, 3, &mut rng);
            let b = crate::fock::random_symmetric_vector(&cfg.kernel, 4, 3, &mut rng);
            let lhs = op.apply(&a).inner(&b, &w);
            let rhs = a.inner(&op.apply(&b), &w);
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn top_component_is_q_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let cfg = FieldConfig::new(random_kernel(grid(3), &mut rng), 0.6, 3).unwrap();
        let f = real_fn(&mut rng, 3);
        let g = real_fn(&mut rng, 3);
        let v = word_vector(&cfg, &[f.clone(), g.clone()]).unwrap();
        assert!(v.component(2).max_abs_diff(&q_product(&cfg.kernel, &f, &g)) < 1e-14);
    }

    #[test]
    fn recurrence_reproduces_symmetrized_tensor() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let cfg = FieldConfig::new(random_kernel(grid(3), &mut rng), 0.9, 4).unwrap();
        for idx in [
            vec![0, 0],
            vec![1, 0, 1],
            vec![2, 2, 0, 2],
            vec![0, 1, 1, 0],
        ] {
            let v = wick_recurrence_apply(&cfg, &idx).unwrap().on_vacuum();
            let d: Vec<_> = idx.iter().map(|&i| delta(&cfg.kernel, i)).collect();
            let expected = symmetrize(&cfg.kernel, &FockTensor::tensor_all(3, &d));
            let n = idx.len();
            assert!(v.component(n).max_abs_diff(&expected) < 1e-10);
            for lower in 0..n {
                assert!(v.component(lower).max_abs() < 1e-10);
            }
        }
    }

    #[test]
    fn recurrence_at_two_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let cfg = FieldConfig::new(random_kernel(grid(2), &mut rng), 0.5, 4).unwrap();
        for (s, t) in [(0, 0), (0, 1), (1, 0)] {
            let w2 = wick_recurrence_apply(&cfg, &[s, t]).unwrap();
            let ws = omega_at(&cfg, s);
            let wt = omega_at(&cfg, t);
            let d = if s == t { 1.0 / cfg.weights()[s] } else { 0.0 };
            let id = GradedOperator::identity(&cfg.kernel, 4);
            let expected = GradedOperator::linear_combination(&[
                (ONE, &(&ws * &wt)),
                (c(-cfg.lambda * d, 0.0), &wt),
                (c(-d, 0.0), &id),
            ]);
            assert!(w2.max_difference(&expected, 2) < 1e-12);
        }
    }

    #[test]
    fn normal_order_single_and_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let cfg = FieldConfig::new(random_kernel(grid(2), &mut rng), 0.0, 4).unwrap();
        let n1 = normal_order_product(&cfg, &[1]).unwrap();
        assert!(n1.max_difference(&omega_at(&cfg, 1), 3) < 1e-12);
        for (s, t) in [(0, 1), (1, 1), (1, 0)] {
            let a = normal_order_product(&cfg, &[s, t]).unwrap();
            let b = wick_recurrence_apply(&cfg, &[s, t]).unwrap();
            assert!(a.max_difference(&b, 2) < 1e-12);
        }
    }

    #[test]
    fn point_neutral_matches_number_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let k = Arc::new(random_kernel(grid(3), &mut rng));
        for i in 0..3 {
            let (ci, ai) = point_operators(&k, i, 4);
            let n0 = neutral(&k, &delta(&k, i), 4);
            assert!((&ci * &ai).max_difference(&n0, 4) < 1e-12);
        }
    }

    #[test]
    fn wick_vs_normal_dichotomy() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let sign = FieldConfig::new(random_sign_kernel(grid(2), &mut rng), 0.0, 4).unwrap();
        let r = wick_vs_normal_report(&sign, 3).unwrap();
        assert!(r.expect_equal && r.residual < 1e-10, "{r:?}");
        let anyon =
            FieldConfig::new(build_anyonic_kernel(grid(2), c(0.0, 1.0)).unwrap(), 0.0, 4).unwrap();
        let r = wick_vs_normal_report(&anyon, 3).unwrap();
        assert!(!r.expect_equal && r.residual > 1e-6, "{r:?}");
        let boson = FieldConfig::new(build_anyonic_kernel(grid(2), ONE).unwrap(), 1.0, 4).unwrap();
        let r = wick_vs_normal_report(&boson, 3).unwrap();
        assert!(r.expect_equal && r.residual < 1e-10, "{r:?}");
        let fermi = FieldConfig::new(build_anyonic_kernel(grid(2), -ONE).unwrap(), 1.0, 4).unwrap();
        let r = wick_vs_normal_report(&fermi, 3).unwrap();
        assert!(!r.expect_equal && r.residual > 1e-6, "{r:?}");
    }

    #[test]
    fn wick_rule_matches_operator_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        let q = Complex64::from_polar(1.0, rng.gen_range(0.0..6.28));
        let cfg = FieldConfig::new(build_anyonic_kernel(grid(3), q).unwrap(), 0.7, 4).unwrap();
        for n in 1..=4 {
            let fs: Vec<_> = (0..n).map(|_| real_fn(&mut rng, 3)).collect();
            let e = wick_rule_expand(&cfg, &fs).unwrap();
            assert!(e.residual < 1e-10, "n = {n}: {}", e.residual);
        }
        let two = wick_rule_expand(&cfg, &[real_fn(&mut rng, 3), real_fn(&mut rng, 3)]).unwrap();
        assert_eq!(two.terms, 3);
    }

    #[test]
    fn moments_formula_matches_vacuum_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(39);
        let k = random_kernel(grid(3), &mut rng);
        for lambda in [0.0, 1.0, 0.7] {
            let cfg = FieldConfig::new(k.clone(), lambda, 5).unwrap();
            for n in 0..=5 {
                let fs: Vec<_> = (0..n).map(|_| real_fn(&mut rng, 3)).collect();
                let a = vacuum_state(&fs, &cfg).unwrap();
                let b = moment_formula(&cfg.kernel, lambda, &fs).unwrap();
                assert!((a - b).norm() < 1e-10, "λ={lambda} n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn omega_cumulants_are_diagonal() {
        let q = Complex64::from_polar(1.0, 1.2);
        let cfg = FieldConfig::new(build_anyonic_kernel(grid(2), q).unwrap(), 0.6, 4).unwrap();
        let ms = moment_tensors(&cell_fields(&cfg), 4).unwrap();
        let cs = cumulants_from_moments(&cfg.kernel, &ms).unwrap();
        assert!(cs[0].max_abs() < 1e-12);
        for (d, t) in cs.iter().enumerate().skip(1) {
            let n = d + 1;
            for i in 0..2 {
                let diag = vec![i; n];
                let expected = cfg.lambda.powi(n as i32 - 2) * cfg.weights()[i];
                assert!((t.get(&diag) - c(expected, 0.0)).norm() < 1e-10);
            }
            let total: f64 = t.data().iter().map(|z| z.norm()).sum();
            let diag_total: f64 = (0..2).map(|i| t.get(&vec![i; n]).norm()).sum();
            assert!((total - diag_total).abs() < 1e-10);
        }
    }
}
