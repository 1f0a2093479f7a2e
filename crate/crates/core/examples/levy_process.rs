//! Lévy field ξ for a two-atom jump measure: cumulants, the Lévy measure and
//! independence over disjoint supports.

use std::sync::Arc;

use num_complex::Complex64;
use qfock::kernel::{build_anyonic_kernel, SiteGrid};
use qfock::levy::{build_levy_space, pyramidal_trials, verify_levy_cumulants, JumpMeasure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qfock::Result<()> {
    let base = Arc::new(build_anyonic_kernel(
        SiteGrid::uniform(3, 1.0, 0.5)?,
        Complex64::from_polar(1.0, 1.2),
    )?);
    let space = build_levy_space(base, JumpMeasure::new(vec![(-1.0, 0.4), (2.0, 0.6)])?)?;

    let r = verify_levy_cumulants(&space, 5, 5)?;
    println!(
        "cumulant deviation per degree {:?}",
        r.per_degree
            .iter()
            .map(|x| format!("{x:.1e}"))
            .collect::<Vec<_>>()
    );
    for (n, nu, levy) in &r.levy_moments {
        println!("n = {n}: ∫x^(n−2)dν = {nu:.6}, ∫x^n dLévy = {levy:.6}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let worst = pyramidal_trials(&space, &[0], &[1, 2], 20, 4, 4, &mut rng)?;
    println!("pyramidal factorization residual over 20 words: {worst:.2e}");
    Ok(())
}
