//! The kinetic solution loses its k-dependence under the superdiffusive
//! scaling, and its k-average approaches the fractional heat flow.

use std::f64::consts::PI;

use fracchain::dispersion::ModelParams;
use fracchain::frac_pde::{compare_l2, FracField, Profile};
use fracchain::kinetic_mc;
use num_complex::Complex64;

fn main() -> fracchain::Result<()> {
    let params = ModelParams::new(4.0);
    let u0 = |y: f64, k: f64| (-0.5 * y * y).exp() * (1.0 + 0.8 * (2.0 * PI * k).cos());
    let y: Vec<f64> = (0..=40).map(|i| -10.0 + 0.5 * i as f64).collect();
    let k_grid = kinetic_mc::midpoint_k_grid(16);
    let reference = FracField::from_spectrum(80.0, 4096, 1.5, kinetic_mc::flight_kappa(&params)?, |p| {
        Complex64::new((2.0 * PI).sqrt() * (-2.0 * PI * PI * p * p).exp(), 0.0)
    })?
    .evolve(1.0)?;
    let target = Profile { y: y.clone(), w: reference.to_real_space(&y)? };
    for (i, n) in [1e2, 1e3].into_iter().enumerate() {
        let est = kinetic_mc::rescaled_un_profile(&params, &u0, n, 1.0, &y, &k_grid, 300, 50 + i as u64)?;
        let deficit: f64 = est.iter().map(|e| e.deficit * 0.5).sum();
        let avg = Profile { y: y.clone(), w: est.iter().map(|e| e.k_average).collect() };
        println!("N = {n:.0e}: k-variance deficit {deficit:.3e}, L2 distance to the limit {:.3e}", compare_l2(&avg, &target)?);
    }
    Ok(())
}
