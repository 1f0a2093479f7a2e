//! Q-commutation relations of point creation and annihilation operators.

use std::sync::Arc;

use num_complex::Complex64;
use qfock::fock::check_ccr;
use qfock::kernel::{build_anyonic_kernel, build_window_kernel, SiteGrid};

fn main() -> qfock::Result<()> {
    let grid = || SiteGrid::uniform(3, 1.0, 0.7);
    let kernels = [
        (
            "boson",
            build_anyonic_kernel(grid()?, Complex64::new(1.0, 0.0))?,
        ),
        (
            "fermion",
            build_anyonic_kernel(grid()?, Complex64::new(-1.0, 0.0))?,
        ),
        (
            "anyon q = i",
            build_anyonic_kernel(grid()?, Complex64::i())?,
        ),
        ("window r = 1.5", build_window_kernel(grid()?, 1.5)?),
    ];
    for (name, k) in kernels {
        let r = check_ccr(&Arc::new(k), 4)?;
        println!(
            "{name:>15}: mixed {:.1e}  annihilators {:.1e}  creators {:.1e}  (degrees ≤ {})",
            r.mixed, r.annihilators, r.creators, r.guarded_degree
        );
    }
    Ok(())
}
