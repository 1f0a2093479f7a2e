//! Q-symmetrization of a random two-particle tensor on a four-cell grid.

use num_complex::Complex64;
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::symmetrize::{symmetrize, symmetrize_recursive, symmetry_defect};
use qfock::tensor::FockTensor;

fn main() -> qfock::Result<()> {
    let grid = SiteGrid::uniform(4, 1.0, 0.5)?;
    let k = build_anyonic_kernel(grid, Complex64::from_polar(1.0, 0.9))?;

    let f = FockTensor::from_data(
        4,
        2,
        (0..16)
            .map(|i| Complex64::new(i as f64, -0.5 * i as f64))
            .collect(),
    )?;
    let pf = symmetrize(&k, &f);
    println!(
        "defect before {:.3e}, after {:.3e}",
        symmetry_defect(&k, &f),
        symmetry_defect(&k, &pf)
    );
    println!("P(Pf) − Pf = {:.3e}", symmetrize(&k, &pf).max_abs_diff(&pf));

    // h ⊛ g through the one-step recursion
    let h = FockTensor::real_vector(&[1.0, 0.0, -1.0, 2.0]);
    let g = FockTensor::real_vector(&[0.5, 0.5, 0.0, 1.0]);
    let rec = symmetrize_recursive(&k, &h, &g)?;
    let direct = symmetrize(&k, &h.tensor(&g));
    println!("recursive vs explicit: {:.3e}", rec.max_abs_diff(&direct));
    Ok(())
}
