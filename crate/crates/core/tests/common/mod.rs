//! Brute-force reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use qfock::kernel::QKernel;
use qfock::tensor::{decode, encode, FockTensor};

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `Ψ_j` (1-based) straight from its definition.
pub fn psi(k: &QKernel, j: usize, f: &FockTensor) -> FockTensor {
    let (m, n) = (f.m(), f.degree());
    let mut out = FockTensor::zeros(m, n);
    let mut idx = vec![0; n];
    for flat in 0..f.len() {
        decode(m, flat, &mut idx);
        let c = k.q(idx[j - 1], idx[j]);
        idx.swap(j - 1, j);
        out.data_mut()[flat] = c * f.data()[encode(m, &idx)];
    }
    out
}

/// `P_n` as the average of `Ψ_π` over the whole group, each `Ψ_π` reached by
/// a breadth-first walk over adjacent transpositions.
pub fn orbit_average(k: &QKernel, f: &FockTensor) -> FockTensor {
    let n = f.degree();
    if n < 2 {
        return f.clone();
    }
    let start: Vec<usize> = (0..n).collect();
    let mut seen: HashMap<Vec<usize>, FockTensor> = HashMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone(), f.clone());
    queue.push_back(start);
    while let Some(p) = queue.pop_front() {
        let t = seen[&p].clone();
        for j in 1..n {
            let mut q = p.clone();
            q.swap(j - 1, j);
            if !seen.contains_key(&q) {
                seen.insert(q.clone(), psi(k, j, &t));
                queue.push_back(q);
            }
        }
    }
    let mut acc = FockTensor::zeros(f.m(), n);
    for t in seen.values() {
        acc.add_assign(t);
    }
    acc.scaled(Complex64::new(1.0 / seen.len() as f64, 0.0))
}

/// Number of permutations of `n` with each inversion count.
pub fn mahonian(n: usize) -> Vec<u64> {
    let mut row = vec![1u64];
    for k in 1..=n {
        let mut next = vec![0u64; row.len() + k - 1];
        for (i, &c) in row.iter().enumerate() {
            for extra in 0..k {
                next[i + extra] += c;
            }
        }
        row = next;
    }
    row
}

/// `Σ_π q^{inv(π)}`.
pub fn inversion_sum(q: Complex64, n: usize) -> Complex64 {
    mahonian(n)
        .iter()
        .enumerate()
        .map(|(k, &c)| q.powu(k as u32) * c as f64)
        .sum()
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

pub fn random_tensor<R: rand::Rng>(m: usize, n: usize, rng: &mut R) -> FockTensor {
    let mut t = FockTensor::zeros(m, n);
    for z in t.data_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    t
}

pub fn random_real_vector<R: rand::Rng>(m: usize, rng: &mut R) -> FockTensor {
    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    FockTensor::real_vector(&v)
}

/// Strictly increasing tuples of `0..m` of length `n`.
pub fn increasing(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx = vec![0; n];
    for flat in 0..m.pow(n as u32) {
        decode(m, flat, &mut idx);
        if idx.windows(2).all(|w| w[0] < w[1]) {
            out.push(idx.clone());
        }
    }
    out
}
