//! Q-symmetrization: the operators `Ψ_j`, permutation coefficients `Q_π`,
//! the projections `P_n`, the Q-symmetric tensor product and anyon exclusion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::QKernel;
use crate::tensor::{decode, encode, FockTensor};

/// Tolerance for "this tensor is Q-symmetric" preconditions.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Permutation of `{0..n}` stored by images, `images[i] = π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    /// From the one-based image list `(π(1), …, π(n))`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::Precondition("one-based images start at 1".into()));
        }
        Self::new(images.iter().map(|v| v - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// Pairs `i < j` with `π(i) > π(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.images.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.images[i] > self.images[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All permutations of `{0..n}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![Permutation {
            images: cur.clone(),
        }];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(Permutation {
                images: cur.clone(),
            });
        }
    }
}

/// `Ψ_j f` for one-based `j`: `Q(t_j, t_{j+1}) f(…, t_{j+1}, t_j, …)`.
pub fn psi_j(k: &QKernel, j: usize, f: &FockTensor) -> Result<FockTensor> {
    let n = f.degree();
    if j == 0 || j >= n {
        return Err(Error::IndexOutOfRange {
            index: j,
            valid: if n >= 2 {
                format!("1..={}", n - 1)
            } else {
                "none".into()
            },
        });
    }
    let m = f.m();
    let mut out = FockTensor::zeros(m, n);
    let mut idx = vec![0; n];
    for flat in 0..f.len() {
        decode(m, flat, &mut idx);
        let coeff = k.q(idx[j - 1], idx[j]);
        idx.swap(j - 1, j);
        out.data_mut()[flat] = coeff * f.data()[encode(m, &idx)];
    }
    Ok(out)
}

/// `Q_π(t) = Π_{i<j, π(i)>π(j)} Q(t_i, t_j)`.
pub fn q_coeff(k: &QKernel, pi: &Permutation, idx: &[usize]) -> Complex64 {
    debug_assert_eq!(pi.len(), idx.len());
    pi.inversions()
        .into_iter()
        .fold(Complex64::new(1.0, 0.0), |acc, (i, j)| {
            acc * k.q(idx[i], idx[j])
        })
}

/// Applies `P_len` to the slots `start..start + len`, all other slots held fixed.
pub fn symmetrize_slots(k: &QKernel, f: &FockTensor, start: usize, len: usize) -> FockTensor {
    let n = f.degree();
    assert!(start + len <= n, "slot range out of bounds");
    if len <= 1 {
        return f.clone();
    }
    let m = f.m();
    let perms: Vec<(Vec<usize>, Vec<(usize, usize)>)> = Permutation::all(len)
        .into_iter()
        .map(|p| (p.inverse().images, p.inversions()))
        .collect();
    let norm = 1.0 / perms.len() as f64;
    let mut out = FockTensor::zeros(m, n);
    let mut idx = vec![0; n];
    let mut src = vec![0; n];
    for flat in 0..f.len() {
        decode(m, flat, &mut idx);
        src.copy_from_slice(&idx);
        let mut acc = Complex64::new(0.0, 0.0);
        for (inv, pairs) in &perms {
            let mut coeff = Complex64::new(1.0, 0.0);
            for &(a, b) in pairs {
                coeff *= k.q(idx[start + a], idx[start + b]);
            }
            for (slot, &p) in inv.iter().enumerate() {
                src[start + slot] = idx[start + p];
            }
            acc += coeff * f.data()[encode(m, &src)];
        }
        out.data_mut()[flat] = acc * norm;
    }
    out
}

/// `P_n f = (1/n!) Σ_π Q_π(t) f(t_{π⁻¹(1)}, …, t_{π⁻¹(n)})`.
pub fn symmetrize(k: &QKernel, f: &FockTensor) -> FockTensor {
    symmetrize_slots(k, f, 0, f.degree())
}

/// Largest entry of `Ψ_j f − f` over all `j`.
pub fn symmetry_defect(k: &QKernel, f: &FockTensor) -> f64 {
    (1..f.degree())
        .map(|j| psi_j(k, j, f).expect("j in range").max_abs_diff(f))
        .fold(0.0, f64::max)
}

/// `h ⊛ f` for Q-symmetric `f` through the recursive (n+1)-term formula.
pub fn symmetrize_recursive(k: &QKernel, h: &FockTensor, f: &FockTensor) -> Result<FockTensor> {
    let defect = symmetry_defect(k, f);
    if defect > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { defect });
    }
    Ok(create_symmetric(k, h, f))
}

/// Recursive `h ⊛ f` without checking that `f` is Q-symmetric.
pub(crate) fn create_symmetric(k: &QKernel, h: &FockTensor, f: &FockTensor) -> FockTensor {
    debug_assert_eq!(h.degree(), 1);
    let m = f.m();
    let n = f.degree();
    let mut out = FockTensor::zeros(m, n + 1);
    let mut idx = vec![0; n + 1];
    let mut rest = vec![0; n];
    let norm = 1.0 / (n + 1) as f64;
    let hd = h.data();
    let fd = f.data();
    for flat in 0..out.len() {
        decode(m, flat, &mut idx);
        let mut acc = hd[idx[0]] * fd[encode(m, &idx[1..])];
        for kk in 1..=n {
            let tk = idx[kk];
            let hv = hd[tk];
            if hv == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut prefix = Complex64::new(1.0, 0.0);
            for &ti in &idx[..kk] {
                prefix *= k.q(ti, tk);
            }
            rest[..kk].copy_from_slice(&idx[..kk]);
            rest[kk..].copy_from_slice(&idx[kk + 1..]);
            acc += prefix * hv * fd[encode(m, &rest)];
        }
        out.data_mut()[flat] = acc * norm;
    }
    out
}

/// `f ⊛ g = P(f ⊗ g)`.
pub fn q_product(k: &QKernel, f: &FockTensor, g: &FockTensor) -> FockTensor {
    symmetrize(k, &f.tensor(g))
}

/// `f_1 ⊛ … ⊛ f_n` of degree-1 factors, built right to left by the recursion.
pub fn q_product_all(k: &QKernel, factors: &[FockTensor]) -> FockTensor {
    let m = k.sites();
    factors
        .iter()
        .rev()
        .fold(FockTensor::scalar(m, Complex64::new(1.0, 0.0)), |acc, h| {
            create_symmetric(k, h, &acc)
        })
}

/// `[n]_q = 1 + q + … + q^{n−1}`.
pub fn q_number(q: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc += p;
        p *= q;
    }
    acc
}

/// `[n]_q! = [1]_q ⋯ [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial(q: Complex64, n: usize) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * q_number(q, k))
}

/// Residuals of the anyon exclusion principle, measured on strictly
/// increasing index tuples (the diagonal cells carry mass in the discrete
/// model, so only off-diagonal entries are meaningful).
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionReport {
    pub order: usize,
    /// Largest `|f^{⊛N}(i_1 < … < i_N)|`.
    pub vanishing_residual: f64,
    /// Largest deviation of `f^{⊛n}` from `([n]_q!/n!) Π f(i_k)`, over `n ≤ N`.
    pub closed_form_residual: f64,
    /// Number of strictly increasing tuples inspected at degree `N`.
    pub tuples: usize,
}

impl ExclusionReport {
    pub fn max_residual(&self) -> f64 {
        self.vanishing_residual.max(self.closed_form_residual)
    }
}

/// Strictly increasing `n`-tuples over `{0..m}` in lexicographic order.
pub fn increasing_tuples(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, n, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, 0, &mut Vec::new(), &mut out);
    out
}

pub fn check_exclusion(k: &QKernel, f: &FockTensor, order: usize) -> Result<ExclusionReport> {
    let q = k.anyonic_q().ok_or(Error::NotAnyonic)?;
    let defect = (q.powu(order as u32) - 1.0).norm();
    if order < 2 || defect > 1e-10 || (q - 1.0).norm() <= 1e-10 {
        return Err(Error::BadRoot { order, defect });
    }
    if k.sites() < order {
        return Err(Error::Precondition(format!(
            "at least {order} sites for exclusion at order {order}, grid has {}",
            k.sites()
        )));
    }
    let m = k.sites();
    let mut power = FockTensor::scalar(m, Complex64::new(1.0, 0.0));
    let mut closed_form_residual: f64 = 0.0;
    let mut vanishing_residual: f64 = 0.0;
    let mut tuples = 0;
    let mut factorial = 1.0;
    for n in 1..=order {
        power = create_symmetric(k, f, &power);
        factorial *= n as f64;
        let coeff = q_factorial(q, n) / factorial;
        let list = increasing_tuples(m, n);
        for t in &list {
            let value = power.get(t);
            let expected = coeff * t.iter().map(|&i| f.data()[i]).product::<Complex64>();
            closed_form_residual = closed_form_residual.max((value - expected).norm());
            if n == order {
                vanishing_residual = vanishing_residual.max(value.norm());
            }
        }
        if n == order {
            tuples = list.len();
        }
    }
    Ok(ExclusionReport {
        order,
        vanishing_residual,
        closed_form_residual,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_anyonic_kernel, random_kernel, SiteGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize) -> FockTensor {
        let mut t = FockTensor::zeros(m, n);
        for z in t.data_mut() {
            *z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        t
    }

    fn grid(m: usize) -> SiteGrid {
        SiteGrid::new(
            (0..m).map(|i| i as f64).collect(),
            (0..m).map(|i| 0.5 + 0.25 * i as f64).collect(),
        )
        .unwrap()
    }

    #[test]
    fn permutations_are_lexicographic_and_complete() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all[1].images(), &[0, 1, 3, 2]);
        assert_eq!(all[23].images(), &[3, 2, 1, 0]);
        assert_eq!(Permutation::all(0).len(), 1);
    }

    #[test]
    fn q_coeff_examples() {
        let q = Complex64::from_polar(1.0, 0.4);
        let k = build_anyonic_kernel(grid(3), q).unwrap();
        assert_eq!(
            q_coeff(&k, &Permutation::identity(3), &[0, 1, 2]),
            c(1.0, 0.0)
        );
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(q_coeff(&k, &swap, &[0, 1]), q);
        let rev = Permutation::from_one_based(&[3, 2, 1]).unwrap();
        assert!((q_coeff(&k, &rev, &[0, 1, 2]) - q * q * q).norm() < 1e-15);
    }

    #[test]
    fn psi_is_an_involution_and_braids() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k = random_kernel(grid(3), &mut rng);
        let f = random_tensor(&mut rng, 3, 3);
        let twice = psi_j(&k, 1, &psi_j(&k, 1, &f).unwrap()).unwrap();
        assert!(twice.max_abs_diff(&f) < 1e-14);
        let lhs = psi_j(&k, 1, &psi_j(&k, 2, &psi_j(&k, 1, &f).unwrap()).unwrap()).unwrap();
        let rhs = psi_j(&k, 2, &psi_j(&k, 1, &psi_j(&k, 2, &f).unwrap()).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
        assert!(psi_j(&k, 3, &f).is_err());
        assert!(psi_j(&k, 0, &f).is_err());
    }

    #[test]
    fn symmetrize_two_sites_by_hand() {
        let q = c(0.0, 1.0);
        let k = build_anyonic_kernel(grid(2), q).unwrap();
        let p = symmetrize(&k, &FockTensor::basis(2, &[0, 1]));
        assert!((p.get(&[0, 1]) - c(0.5, 0.0)).norm() < 1e-15);
        assert!((p.get(&[1, 0]) - 0.5 * q.conj()).norm() < 1e-15);
        assert_eq!(p.get(&[0, 0]), c(0.0, 0.0));
    }

    #[test]
    fn symmetrize_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = grid(3);
        let k = random_kernel(g.clone(), &mut rng);
        let w = g.weights();
        for n in 0..=4 {
            let f = random_tensor(&mut rng, 3, n);
            let h = random_tensor(&mut rng, 3, n);
            let pf = symmetrize(&k, &f);
            assert!(symmetrize(&k, &pf).max_abs_diff(&pf) < 1e-12);
            assert!(symmetry_defect(&k, &pf) < 1e-12);
            let lhs = pf.inner(&h, w);
            let rhs = f.inner(&symmetrize(&k, &h), w);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn recursive_matches_explicit() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k = random_kernel(grid(3), &mut rng);
        for n in 0..=3 {
            let h = random_tensor(&mut rng, 3, 1);
            let f = symmetrize(&k, &random_tensor(&mut rng, 3, n));
            let rec = symmetrize_recursive(&k, &h, &f).unwrap();
            assert!(rec.max_abs_diff(&q_product(&k, &h, &f)) < 1e-12);
        }
        let f = random_tensor(&mut rng, 3, 2);
        let h = random_tensor(&mut rng, 3, 1);
        assert!(matches!(
            symmetrize_recursive(&k, &h, &f),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn q_product_is_associative_with_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let k = random_kernel(grid(3), &mut rng);
        let f = random_tensor(&mut rng, 3, 1);
        let g = random_tensor(&mut rng, 3, 1);
        let h = random_tensor(&mut rng, 3, 1);
        let left = q_product(&k, &q_product(&k, &f, &g), &h);
        let right = q_product(&k, &f, &q_product(&k, &g, &h));
        assert!(left.max_abs_diff(&right) < 1e-12);
        let one = FockTensor::scalar(3, c(1.0, 0.0));
        assert!(q_product(&k, &one, &f).max_abs_diff(&f) < 1e-15);
    }

    #[test]
    fn fermion_square_vanishes_off_diagonal() {
        let k = build_anyonic_kernel(grid(3), c(-1.0, 0.0)).unwrap();
        let f = FockTensor::vector(vec![c(1.0, 0.2), c(-0.4, 1.0), c(0.3, 0.0)]);
        let ff = q_product(&k, &f, &f);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!(ff.get(&[i, j]).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(c(1.0, 0.0), 5), c(5.0, 0.0));
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(q_number(w, 3).norm() < 1e-15);
        assert_eq!(q_number(c(-1.0, 0.0), 2), c(0.0, 0.0));
        assert_eq!(q_factorial(w, 0), c(1.0, 0.0));
        assert!((q_factorial(c(1.0, 0.0), 4) - c(24.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exclusion_at_roots_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for order in 2..=5 {
            let q = Complex64::from_polar(1.0, 2.0 * PI / order as f64);
            let k = build_anyonic_kernel(grid(order), q).unwrap();
            let f = random_tensor(&mut rng, order, 1);
            let r = check_exclusion(&k, &f, order).unwrap();
            assert!(r.max_residual() < 1e-10, "order {order}: {r:?}");
        }
        let q = Complex64::from_polar(1.0, 0.3);
        let k = build_anyonic_kernel(grid(3), q).unwrap();
        let f = random_tensor(&mut rng, 3, 1);
        assert!(matches!(
            check_exclusion(&k, &f, 3),
            Err(Error::BadRoot { .. })
        ));
    }

    #[test]
    fn exclusion_degree_two_closed_form() {
        let q = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let k = build_anyonic_kernel(grid(3), q).unwrap();
        let f = FockTensor::vector(vec![c(1.0, 0.5), c(-0.3, 2.0), c(0.7, 0.0)]);
        let ff = q_product(&k, &f, &f);
        let expected = (1.0 + q) / 2.0 * f.data()[0] * f.data()[2];
        assert!((ff.get(&[0, 2]) - expected).norm() < 1e-14);
    }
}
