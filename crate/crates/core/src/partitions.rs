//! Set partitions, marked partitions, crossing coefficients, the moments
//! formula and the moment–cumulant recursion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::QKernel;
use crate::tensor::{decode, FockTensor};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest `n` accepted by [`enumerate_partitions`].
pub const MAX_PARTITION_SIZE: usize = 8;
/// Largest `n` accepted by [`enumerate_marked`] and the cumulant recursion.
pub const MAX_MARKED_SIZE: usize = 6;

/// Cell masses of a moment or cumulant measure of degree `n`.
pub type MomentTensor = FockTensor;

/// Partition of `{0..n}`; blocks are sorted and ordered by their minima.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// From arbitrary blocks; rejects anything that is not a disjoint cover of `{0..n}`.
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Precondition("partition blocks are nonempty".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n || seen[i] {
                    return Err(Error::Precondition(format!(
                        "{i} repeated or outside 0..{n}"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Precondition(
                "blocks do not cover every element".into(),
            ));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { n, blocks })
    }

    /// From one-based blocks, as partitions are usually written.
    pub fn from_one_based(n: usize, blocks: &[&[usize]]) -> Result<Self> {
        if blocks.iter().any(|b| b.contains(&0)) {
            return Err(Error::Precondition("one-based blocks start at 1".into()));
        }
        Self::new(
            n,
            blocks
                .iter()
                .map(|b| b.iter().map(|i| i - 1).collect())
                .collect(),
        )
    }

    fn from_growth_string(rgs: &[usize]) -> Self {
        let count = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i);
        }
        Self {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block number of each element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }

    /// Ordered block pairs `(B₁, B₂)` with `min B₁ < min B₂ < max B₁ < max B₂`.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, b1) in self.blocks.iter().enumerate() {
            for (b, b2) in self.blocks.iter().enumerate() {
                let (min1, max1) = (b1[0], *b1.last().unwrap());
                let (min2, max2) = (b2[0], *b2.last().unwrap());
                if min1 < min2 && min2 < max1 && max1 < max2 {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// Which partitions to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionFilter {
    All,
    /// Every block has at least two elements.
    MinBlock2,
    /// Every block has exactly two elements.
    Pairs,
}

/// All partitions of `{0..n}` passing `filter`, in lexicographic order of
/// their restricted growth strings.
pub fn enumerate_partitions(n: usize, filter: PartitionFilter) -> Result<Vec<SetPartition>> {
    if n > MAX_PARTITION_SIZE {
        return Err(Error::Range {
            what: "partition size",
            value: n,
            range: format!("0..={MAX_PARTITION_SIZE}"),
        });
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition {
            n: 0,
            blocks: Vec::new(),
        });
        return Ok(out);
    }
    let mut rgs = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        let p = SetPartition::from_growth_string(&rgs);
        let keep = match filter {
            PartitionFilter::All => true,
            PartitionFilter::MinBlock2 => p.blocks.iter().all(|b| b.len() >= 2),
            PartitionFilter::Pairs => p.blocks.iter().all(|b| b.len() == 2),
        };
        if keep {
            out.push(p);
        }
        // advance to the next restricted growth string
        let Some(i) = (1..n).rev().find(|&i| rgs[i] <= maxes[i - 1]) else {
            return Ok(out);
        };
        rgs[i] += 1;
        maxes[i] = maxes[i - 1].max(rgs[i]);
        for j in (i + 1)..n {
            rgs[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

/// Partition whose blocks carry marks `+1` or `−1`; singletons are always `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedPartition {
    partition: SetPartition,
    marks: Vec<i8>,
}

impl MarkedPartition {
    /// Marks are listed per block in the partition's canonical block order.
    pub fn new(partition: SetPartition, marks: Vec<i8>) -> Result<Self> {
        if marks.len() != partition.len() {
            return Err(Error::ShapeMismatch("one mark per block".into()));
        }
        for (b, &mark) in partition.blocks.iter().zip(&marks) {
            if mark != 1 && mark != -1 {
                return Err(Error::Precondition("marks are +1 or -1".into()));
            }
            if b.len() == 1 && mark != 1 {
                return Err(Error::Precondition("singleton blocks carry mark +1".into()));
            }
        }
        Ok(Self { partition, marks })
    }

    pub fn partition(&self) -> &SetPartition {
        &self.partition
    }

    pub fn marks(&self) -> &[i8] {
        &self.marks
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        self.partition.blocks()
    }

    /// Blocks with mark `+1`, ordered by their maxima.
    pub fn kept_blocks(&self) -> Vec<usize> {
        let mut kept: Vec<usize> = (0..self.marks.len())
            .filter(|&b| self.marks[b] == 1)
            .collect();
        kept.sort_by_key(|&b| *self.partition.blocks[b].last().unwrap());
        kept
    }

    /// Ordered block pairs entering `Q(𝒱; t)`, as `(B₁, B₂)`: both marked −1
    /// and crossing, or `B₁` marked +1, `B₂` marked −1 and
    /// `min B₂ < max B₁ < max B₂`.
    pub fn crossing_pairs(&self) -> Vec<(usize, usize)> {
        let blocks = &self.partition.blocks;
        let mut out = Vec::new();
        for (a, b1) in blocks.iter().enumerate() {
            for (b, b2) in blocks.iter().enumerate() {
                if a == b || self.marks[b] != -1 {
                    continue;
                }
                let (min1, max1) = (b1[0], *b1.last().unwrap());
                let (min2, max2) = (b2[0], *b2.last().unwrap());
                let hit = if self.marks[a] == -1 {
                    min1 < min2 && min2 < max1 && max1 < max2
                } else {
                    min2 < max1 && max1 < max2
                };
                if hit {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// All marked partitions of `{0..n}`.
pub fn enumerate_marked(n: usize) -> Result<Vec<MarkedPartition>> {
    if n > MAX_MARKED_SIZE {
        return Err(Error::Range {
            what: "marked partition size",
            value: n,
            range: format!("0..={MAX_MARKED_SIZE}"),
        });
    }
    let mut out = Vec::new();
    for p in enumerate_partitions(n, PartitionFilter::All)? {
        let big: Vec<usize> = (0..p.len()).filter(|&b| p.blocks[b].len() >= 2).collect();
        for mask in 0..(1usize << big.len()) {
            let mut marks = vec![1i8; p.len()];
            for (bit, &b) in big.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    marks[b] = -1;
                }
            }
            out.push(MarkedPartition {
                partition: p.clone(),
                marks,
            });
        }
    }
    Ok(out)
}

/// `Π Q(t_{min B₂}, t_{max B₁})` over crossing block pairs.
pub fn crossing_coeff(k: &QKernel, v: &SetPartition, idx: &[usize]) -> Complex64 {
    debug_assert_eq!(idx.len(), v.n);
    v.crossings().into_iter().fold(ONE, |acc, (a, b)| {
        acc * k.q(idx[v.blocks[b][0]], idx[*v.blocks[a].last().unwrap()])
    })
}

/// `Q(𝒱; t)` for a marked partition.
pub fn marked_crossing_coeff(k: &QKernel, v: &MarkedPartition, idx: &[usize]) -> Complex64 {
    debug_assert_eq!(idx.len(), v.partition.n);
    let blocks = v.blocks();
    v.crossing_pairs().into_iter().fold(ONE, |acc, (a, b)| {
        acc * k.q(idx[blocks[b][0]], idx[*blocks[a].last().unwrap()])
    })
}

/// Visits every assignment of one cell per block.
pub(crate) fn for_each_assignment(m: usize, blocks: usize, mut visit: impl FnMut(&[usize])) {
    let total = m.pow(blocks as u32);
    let mut cells = vec![0; blocks];
    for flat in 0..total {
        decode(m, flat, &mut cells);
        visit(&cells);
    }
}

/// Expands one cell per block into a cell per element.
pub(crate) fn spread(block_of: &[usize], cells: &[usize], out: &mut [usize]) {
    for (slot, &b) in out.iter_mut().zip(block_of) {
        *slot = cells[b];
    }
}

/// `τ(⟨f_1,ω⟩⋯⟨f_n,ω⟩)` through the partition sum over blocks of size ≥ 2.
pub fn moment_formula(k: &QKernel, lambda: f64, fs: &[FockTensor]) -> Result<Complex64> {
    let n = fs.len();
    let m = k.sites();
    let w = k.weights();
    let mut total = Complex64::new(0.0, 0.0);
    let mut idx = vec![0; n];
    for v in enumerate_partitions(n, PartitionFilter::MinBlock2)? {
        let lam: f64 = v
            .blocks
            .iter()
            .map(|b| lambda.powi(b.len() as i32 - 2))
            .product();
        if lam == 0.0 {
            continue;
        }
        let block_of = v.block_of();
        for_each_assignment(m, v.len(), |cells| {
            let mut value = Complex64::new(lam, 0.0);
            for (b, block) in v.blocks.iter().enumerate() {
                let s = cells[b];
                value *= w[s];
                for &i in block {
                    value *= fs[i].data()[s];
                }
            }
            if value != Complex64::new(0.0, 0.0) {
                spread(&block_of, cells, &mut idx);
                total += value * crossing_coeff(k, &v, &idx);
            }
        });
    }
    Ok(total)
}

/// Cumulant tensors `c_1..c_n` from moment tensors `m_1..m_n` by the
/// cellwise recursion `c_n = m_n − Σ_{𝒱 ≠ 1̂} Q(𝒱;·) Π c_{|B|}`.
pub fn cumulants_from_moments(k: &QKernel, moments: &[MomentTensor]) -> Result<Vec<MomentTensor>> {
    let n_max = moments.len();
    if n_max > MAX_MARKED_SIZE {
        return Err(Error::Range {
            what: "cumulant degree",
            value: n_max,
            range: format!("0..={MAX_MARKED_SIZE}"),
        });
    }
    let m = k.sites();
    for (d, t) in moments.iter().enumerate() {
        if t.degree() != d + 1 || t.m() != m {
            return Err(Error::ShapeMismatch(format!(
                "moment tensor {} must have degree {} over {m} cells",
                d + 1,
                d + 1
            )));
        }
    }
    let mut cumulants: Vec<MomentTensor> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let parts = enumerate_partitions(n, PartitionFilter::All)?;
        let mut c = moments[n - 1].clone();
        let mut idx = vec![0; n];
        let mut sub = Vec::with_capacity(n);
        for flat in 0..c.len() {
            decode(m, flat, &mut idx);
            let mut lower = Complex64::new(0.0, 0.0);
            for v in parts.iter().filter(|v| v.len() > 1) {
                let mut term = crossing_coeff(k, v, &idx);
                for b in &v.blocks {
                    sub.clear();
                    sub.extend(b.iter().map(|&i| idx[i]));
                    term *= cumulants[b.len() - 1].get(&sub);
                    if term == Complex64::new(0.0, 0.0) {
                        break;
                    }
                }
                lower += term;
            }
            c.data_mut()[flat] -= lower;
        }
        cumulants.push(c);
    }
    Ok(cumulants)
}

/// Inverse of [`cumulants_from_moments`]: `m_n = Σ_𝒱 Q(𝒱;·) Π c_{|B|}`.
pub fn moments_from_cumulants(
    k: &QKernel,
    cumulants: &[MomentTensor],
) -> Result<Vec<MomentTensor>> {
    let m = k.sites();
    let mut out = Vec::with_capacity(cumulants.len());
    for n in 1..=cumulants.len() {
        let parts = enumerate_partitions(n, PartitionFilter::All)?;
        let mut t = FockTensor::try_zeros(m, n)?;
        let mut idx = vec![0; n];
        let mut sub = Vec::with_capacity(n);
        for flat in 0..t.len() {
            decode(m, flat, &mut idx);
            let mut acc = Complex64::new(0.0, 0.0);
            for v in &parts {
                let mut term = crossing_coeff(k, v, &idx);
                for b in &v.blocks {
                    sub.clear();
                    sub.extend(b.iter().map(|&i| idx[i]));
                    term *= cumulants[b.len() - 1].get(&sub);
                }
                acc += term;
            }
            t.data_mut()[flat] = acc;
        }
        out.push(t);
    }
    Ok(out)
}

/// `C_n(⟨f_1,·⟩, …, ⟨f_n,·⟩) = Σ_cells c_n(cells) Π f_k(cell_k)`.
pub fn contract(cumulant: &MomentTensor, fs: &[&FockTensor]) -> Complex64 {
    let n = cumulant.degree();
    debug_assert_eq!(fs.len(), n);
    let m = cumulant.m();
    let mut idx = vec![0; n];
    let mut acc = Complex64::new(0.0, 0.0);
    for (flat, c) in cumulant.data().iter().enumerate() {
        if *c == Complex64::new(0.0, 0.0) {
            continue;
        }
        decode(m, flat, &mut idx);
        acc += c * idx
            .iter()
            .zip(fs)
            .map(|(&i, f)| f.data()[i])
            .product::<Complex64>();
    }
    acc
}

/// Largest mixed cumulant and the sequence attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceReport {
    pub max_mixed: f64,
    /// Function indices of the worst non-constant sequence, if any was tested.
    pub witness: Option<Vec<usize>>,
}

/// Evaluates every mixed cumulant over non-constant index sequences of
/// length `2..=depth` built from `fs`.
pub fn independence_test(
    cumulants: &[MomentTensor],
    fs: &[FockTensor],
    depth: usize,
) -> Result<IndependenceReport> {
    if depth > 5 || depth > cumulants.len() {
        return Err(Error::Range {
            what: "independence depth",
            value: depth,
            range: format!("0..={}", cumulants.len().min(5)),
        });
    }
    let mut report = IndependenceReport {
        max_mixed: 0.0,
        witness: None,
    };
    let kf = fs.len();
    if kf < 2 {
        return Ok(report);
    }
    for len in 2..=depth {
        let mut seq = vec![0; len];
        for flat in 0..kf.pow(len as u32) {
            decode(kf, flat, &mut seq);
            if seq.iter().all(|&j| j == seq[0]) {
                continue;
            }
            let args: Vec<&FockTensor> = seq.iter().map(|&j| &fs[j]).collect();
            let value = contract(&cumulants[len - 1], &args).norm();
            if report.witness.is_none() || value > report.max_mixed {
                report.max_mixed = value;
                report.witness = Some(seq.clone());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{build_anyonic_kernel, build_window_kernel, random_kernel, SiteGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid(m: usize) -> SiteGrid {
        SiteGrid::uniform(m, 1.0, 0.5).unwrap()
    }

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn partition_counts() {
        for n in 1..=8 {
            let all = enumerate_partitions(n, PartitionFilter::All).unwrap();
            assert_eq!(all.len(), bell(n));
            let pairs = enumerate_partitions(n, PartitionFilter::Pairs).unwrap();
            let expected = if n % 2 == 1 {
                0
            } else {
                (1..n).step_by(2).product()
            };
            assert_eq!(pairs.len(), expected);
        }
        assert_eq!(
            enumerate_partitions(3, PartitionFilter::MinBlock2)
                .unwrap()
                .len(),
            1
        );
        assert!(enumerate_partitions(9, PartitionFilter::All).is_err());
        let first = &enumerate_partitions(3, PartitionFilter::All).unwrap()[0];
        assert_eq!(first.blocks(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn marked_counts() {
        assert_eq!(enumerate_marked(1).unwrap().len(), 1);
        assert_eq!(enumerate_marked(2).unwrap().len(), 3);
        assert_eq!(enumerate_marked(3).unwrap().len(), 9);
        assert!(enumerate_marked(7).is_err());
    }

    #[test]
    fn crossing_examples() {
        let q = Complex64::from_polar(1.0, 0.8);
        let k = build_anyonic_kernel(grid(4), q).unwrap();
        let v = SetPartition::from_one_based(4, &[&[1, 3], &[2, 4]]).unwrap();
        assert!((crossing_coeff(&k, &v, &[0, 1, 2, 3]) - q).norm() < 1e-15);
        let nc = SetPartition::from_one_based(4, &[&[1, 4], &[2, 3]]).unwrap();
        assert_eq!(crossing_coeff(&k, &nc, &[0, 1, 2, 3]), ONE);

        let fermi = build_window_kernel(grid(6), 100.0).unwrap();
        let v = SetPartition::from_one_based(6, &[&[1, 4], &[2, 5], &[3, 6]]).unwrap();
        assert_eq!(v.crossings().len(), 3);
        assert!((crossing_coeff(&fermi, &v, &[0, 1, 2, 3, 4, 5]) + ONE).norm() < 1e-15);
    }

    #[test]
    fn marked_crossing_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let k = random_kernel(grid(6), &mut rng);
        let p = SetPartition::from_one_based(6, &[&[1, 6], &[2, 3, 5], &[4]]).unwrap();
        let v = MarkedPartition::new(p, vec![1, -1, 1]).unwrap();
        let idx = [0, 1, 2, 3, 4, 5];
        assert!((marked_crossing_coeff(&k, &v, &idx) - k.q(1, 3)).norm() < 1e-15);

        let p = SetPartition::from_one_based(4, &[&[1, 4], &[2, 3]]).unwrap();
        let v = MarkedPartition::new(p.clone(), vec![-1, -1]).unwrap();
        assert_eq!(marked_crossing_coeff(&k, &v, &[0, 1, 2, 3]), ONE);
        let all_plus = MarkedPartition::new(p, vec![1, 1]).unwrap();
        assert_eq!(marked_crossing_coeff(&k, &all_plus, &[0, 1, 2, 3]), ONE);
        let single = SetPartition::from_one_based(2, &[&[1], &[2]]).unwrap();
        assert!(MarkedPartition::new(single, vec![-1, 1]).is_err());
    }

    #[test]
    fn moment_formula_small_cases() {
        let k = build_anyonic_kernel(grid(3), Complex64::from_polar(1.0, 0.5)).unwrap();
        let f = FockTensor::real_vector(&[1.0, -2.0, 0.5]);
        let g = FockTensor::real_vector(&[0.3, 1.0, 2.0]);
        let odd = moment_formula(&k, 0.0, &[f.clone(), g.clone(), f.clone()]).unwrap();
        assert_eq!(odd, Complex64::new(0.0, 0.0));
        let two = moment_formula(&k, 0.7, &[f.clone(), g.clone()]).unwrap();
        let expected: f64 = (0..3).map(|i| f.data()[i].re * g.data()[i].re * 0.5).sum();
        assert!((two - Complex64::new(expected, 0.0)).norm() < 1e-14);
    }

    fn random_tensor(rng: &mut ChaCha8Rng, m: usize, n: usize) -> FockTensor {
        let mut t = FockTensor::zeros(m, n);
        for z in t.data_mut() {
            *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        t
    }

    #[test]
    fn cumulant_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let k = random_kernel(grid(2), &mut rng);
        let cs: Vec<_> = (1..=4).map(|n| random_tensor(&mut rng, 2, n)).collect();
        let ms = moments_from_cumulants(&k, &cs).unwrap();
        let back = cumulants_from_moments(&k, &ms).unwrap();
        for (a, b) in cs.iter().zip(&back) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
    }

    #[test]
    fn classical_variance() {
        let k = build_anyonic_kernel(grid(2), ONE).unwrap();
        let m1 = FockTensor::real_vector(&[0.4, -1.0]);
        let mut m2 = FockTensor::zeros(2, 2);
        for z in m2.data_mut() {
            *z = Complex64::new(2.0, 0.0);
        }
        let cs = cumulants_from_moments(&k, &[m1.clone(), m2.clone()]).unwrap();
        assert_eq!(cs[0], m1);
        assert!((cs[1].get(&[0, 1]) - Complex64::new(2.0 + 0.4, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn independence_excludes_constant_sequences() {
        let mut c2 = FockTensor::zeros(2, 2);
        c2.set(&[0, 0], Complex64::new(1.0, 0.0));
        c2.set(&[1, 1], Complex64::new(1.0, 0.0));
        let c1 = FockTensor::zeros(2, 1);
        let f = FockTensor::unit(2, 0);
        let g = FockTensor::unit(2, 1);
        let r = independence_test(&[c1.clone(), c2.clone()], &[f.clone(), g], 2).unwrap();
        assert_eq!(r.max_mixed, 0.0);
        let r = independence_test(&[c1, c2], &[f], 2).unwrap();
        assert!(r.witness.is_none());
    }
}
