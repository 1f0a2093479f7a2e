//! Orthogonal polynomials of the jump measure and the chaos decomposition.

use std::sync::Arc;

use num_complex::Complex64;
use qfock::chaos::{chaos_orthogonality_report, ortho_polys};
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::levy::{build_levy_space, JumpMeasure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfock::Result<()> {
    let base = Arc::new(build_anyonic_kernel(
        SiteGrid::uniform(2, 1.0, 1.0)?,
        Complex64::from_polar(1.0, 0.7),
    )?);
    let space = build_levy_space(
        base,
        JumpMeasure::new(vec![(-0.5, 0.2), (0.4, 0.3), (2.0, 0.5)])?,
    )?;
    let basis = ortho_polys(space.jumps())?;
    for k in 0..basis.len() {
        println!(
            "p_{k}: coefficients {:.4?}, ‖p_{k}‖² = {:.5}",
            basis.coefficients(k),
            basis.norm(k)
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let r = chaos_orthogonality_report(&space, &basis, 3, 3, &mut rng)?;
    println!(
        "Favard {:.1e}, orthogonality {:.1e}, cross chaos {:.1e}, norm identity {:.1e}",
        r.favard_residual, r.basis_orthogonality, r.cross_inner, r.norm_identity
    );
    for row in &r.dimensions {
        println!(
            "degree {}: Σ chaos ranks {} vs symmetric rank {}",
            row.degree, row.chaos_sum, row.symmetric_rank
        );
    }
    Ok(())
}
