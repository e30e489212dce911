//! Checks the rank-two structure of the scattering kernel and the sign of the
//! Dirichlet form on a random trigonometric polynomial.

use std::f64::consts::PI;

use fracchain::scattering::{self, GridFunction};
use num_complex::Complex64;

fn main() -> fracchain::Result<()> {
    let mut worst = 0f64;
    for i in 0..50 {
        for j in 0..50 {
            let (k, kp) = (-0.5 + i as f64 / 50.0, -0.5 + j as f64 / 50.0);
            worst = worst.max((scattering::r_pair(k, kp) - scattering::r_pair_rank2(k, kp)).abs());
        }
    }
    println!("max |R - rank-2 form| on a 50x50 grid: {worst:.2e}");

    let f = GridFunction::from_fn(256, |k| Complex64::new((2.0 * PI * k).cos(), 0.3 * (6.0 * PI * k).sin()))?;
    let lf = scattering::l_apply(&f);
    println!("int L f dk                = {:.2e}", lf.integral().norm());
    println!("Dirichlet form (rank two) = {:.10}", scattering::dirichlet_form(&f));
    println!("Dirichlet form (double)   = {:.10}", scattering::dirichlet_form_double(&f));
    Ok(())
}
