//! The discretized underlying space and the exchange kernel `Q`.
//!
//! The continuum space is replaced by an ordered list of weighted cells. The
//! kernel is a unimodular Hermitian matrix over cells whose diagonal is fixed
//! to 1, which is where the excluded diagonal set of the continuum picture
//! ends up.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for kernel validity (unimodularity, Hermiticity, unit diagonal).
pub const KERNEL_TOL: f64 = 1e-12;

/// Ordered finite discretization of the underlying space with positive cell masses.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteGrid {
    sites: Vec<f64>,
    weights: Vec<f64>,
}

impl SiteGrid {
    pub fn new(sites: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidGrid("grid needs at least one site".into()));
        }
        if sites.len() != weights.len() {
            return Err(Error::InvalidGrid(format!(
                "{} sites but {} weights",
                sites.len(),
                weights.len()
            )));
        }
        if let Some(w) = sites.windows(2).find(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid(format!(
                "sites must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidGrid(format!("weight {w} is not positive")));
        }
        Ok(Self { sites, weights })
    }

    /// `m` equally spaced sites starting at 0 with a common cell weight.
    pub fn uniform(m: usize, spacing: f64, weight: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "spacing {spacing} is not positive"
            )));
        }
        let sites = (0..m).map(|i| i as f64 * spacing).collect();
        Self::new(sites, vec![weight; m])
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[f64] {
        &self.sites
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// How a kernel was built. Used for reporting and for the operations that
/// only make sense for one family (anyon exclusion, continuum-cell forms).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelFamily {
    Anyonic { q: Complex64 },
    Window { r: f64 },
    Explicit,
}

/// Unimodular Hermitian exchange kernel on the cells of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct QKernel {
    grid: SiteGrid,
    matrix: Vec<Complex64>,
    family: KernelFamily,
}

impl QKernel {
    /// Wraps a matrix without checking any invariant. `validate_kernel`
    /// reports how far such a matrix is from a proper kernel.
    pub fn from_raw(grid: SiteGrid, matrix: Vec<Complex64>) -> Result<Self> {
        let m = grid.len();
        if matrix.len() != m * m {
            return Err(Error::ShapeMismatch(format!(
                "kernel matrix has {} entries, grid needs {}",
                matrix.len(),
                m * m
            )));
        }
        Ok(Self {
            grid,
            matrix,
            family: KernelFamily::Explicit,
        })
    }

    /// Explicit kernel from rows; rejected unless it passes `validate_kernel`.
    pub fn explicit(grid: SiteGrid, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let m = grid.len();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::ShapeMismatch(format!(
                "kernel matrix must be {m}x{m}"
            )));
        }
        let kernel = Self::from_raw(grid, rows.into_iter().flatten().collect())?;
        let report = validate_kernel(&kernel);
        if !report.is_valid() {
            return Err(Error::InvalidKernel(format!(
                "hermitian defect {:e}, modulus defect {:e}, diagonal defect {:e}",
                report.hermitian_defect, report.modulus_defect, report.diagonal_defect
            )));
        }
        Ok(kernel)
    }

    pub fn grid(&self) -> &SiteGrid {
        &self.grid
    }

    pub fn family(&self) -> &KernelFamily {
        &self.family
    }

    pub fn sites(&self) -> usize {
        self.grid.len()
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    #[inline]
    pub fn q(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[i * self.grid.len() + j]
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    /// The anyonic parameter, if this kernel was built by `build_anyonic_kernel`.
    pub fn anyonic_q(&self) -> Option<Complex64> {
        match self.family {
            KernelFamily::Anyonic { q } => Some(q),
            _ => None,
        }
    }

    /// True when every entry is ±1 up to `KERNEL_TOL`.
    pub fn is_real_valued(&self) -> bool {
        self.matrix.iter().all(|z| z.im.abs() <= KERNEL_TOL)
    }

    /// True for the boson kernel `Q ≡ 1`.
    pub fn is_identically_one(&self) -> bool {
        self.matrix
            .iter()
            .all(|z| (z - Complex64::new(1.0, 0.0)).norm() <= KERNEL_TOL)
    }

    /// Mean of `Q(s, t)` over pairs of distinct points inside one cell when
    /// the cell is read as a continuum interval. Known only for anyonic
    /// kernels, where half of the pairs are ordered each way.
    pub fn intra_cell_mean(&self) -> Option<f64> {
        self.anyonic_q().map(|q| q.re)
    }

    /// Kernel on a different weighted site set whose entries are looked up
    /// through `base_index`. Used for product spaces where `Q` only depends
    /// on the base coordinate.
    pub(crate) fn pulled_back(&self, grid: SiteGrid, base_index: &[usize]) -> QKernel {
        let n = grid.len();
        let mut matrix = Vec::with_capacity(n * n);
        for &a in base_index {
            for &b in base_index {
                matrix.push(self.q(a, b));
            }
        }
        QKernel {
            grid,
            matrix,
            family: self.family.clone(),
        }
    }
}

/// Anyonic kernel: `q` above the diagonal, `conj(q)` below, 1 on it.
pub fn build_anyonic_kernel(grid: SiteGrid, q: Complex64) -> Result<QKernel> {
    let defect = (q.norm() - 1.0).abs();
    if defect > KERNEL_TOL {
        return Err(Error::NotUnimodular {
            re: q.re,
            im: q.im,
            defect,
        });
    }
    let m = grid.len();
    let mut matrix = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            matrix.push(match i.cmp(&j) {
                std::cmp::Ordering::Less => q,
                std::cmp::Ordering::Greater => q.conj(),
                std::cmp::Ordering::Equal => Complex64::new(1.0, 0.0),
            });
        }
    }
    Ok(QKernel {
        grid,
        matrix,
        family: KernelFamily::Anyonic { q },
    })
}

/// Mixed bose/fermi kernel: −1 for distinct sites closer than `r`, +1 otherwise.
pub fn build_window_kernel(grid: SiteGrid, r: f64) -> Result<QKernel> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    let m = grid.len();
    let t = grid.sites();
    let mut matrix = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let v = if i != j && (t[i] - t[j]).abs() < r {
                -1.0
            } else {
                1.0
            };
            matrix.push(Complex64::new(v, 0.0));
        }
    }
    Ok(QKernel {
        grid,
        matrix,
        family: KernelFamily::Window { r },
    })
}

/// Random unimodular Hermitian kernel with unit diagonal.
pub fn random_kernel<R: Rng + ?Sized>(grid: SiteGrid, rng: &mut R) -> QKernel {
    let m = grid.len();
    let mut matrix = vec![Complex64::new(1.0, 0.0); m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let z = Complex64::from_polar(
                1.0,
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            );
            matrix[i * m + j] = z;
            matrix[j * m + i] = z.conj();
        }
    }
    QKernel {
        grid,
        matrix,
        family: KernelFamily::Explicit,
    }
}

/// Random kernel with entries in {−1, +1}.
pub fn random_sign_kernel<R: Rng + ?Sized>(grid: SiteGrid, rng: &mut R) -> QKernel {
    let m = grid.len();
    let mut matrix = vec![Complex64::new(1.0, 0.0); m * m];
    for i in 0..m {
        for j in (i + 1)..m {
            let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            matrix[i * m + j] = Complex64::new(s, 0.0);
            matrix[j * m + i] = Complex64::new(s, 0.0);
        }
    }
    QKernel {
        grid,
        matrix,
        family: KernelFamily::Explicit,
    }
}

/// Distance of a kernel matrix from the three kernel invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelReport {
    pub hermitian_defect: f64,
    pub modulus_defect: f64,
    pub diagonal_defect: f64,
}

impl KernelReport {
    pub fn max_defect(&self) -> f64 {
        self.hermitian_defect
            .max(self.modulus_defect)
            .max(self.diagonal_defect)
    }

    pub fn is_valid(&self) -> bool {
        self.max_defect() <= KERNEL_TOL
    }
}

pub fn validate_kernel(k: &QKernel) -> KernelReport {
    let m = k.sites();
    let mut report = KernelReport {
        hermitian_defect: 0.0,
        modulus_defect: 0.0,
        diagonal_defect: 0.0,
    };
    for i in 0..m {
        report.diagonal_defect = report
            .diagonal_defect
            .max((k.q(i, i) - Complex64::new(1.0, 0.0)).norm());
        for j in 0..m {
            report.modulus_defect = report.modulus_defect.max((k.q(i, j).norm() - 1.0).abs());
            report.hermitian_defect = report
                .hermitian_defect
                .max((k.q(i, j) - k.q(j, i).conj()).norm());
        }
    }
    report
}
