//! Thermal ensemble of chains: conservation along a run and the flat
//! equilibrium spectral density.

use fracchain::chain_sim::{self, ChainModel, WignerKind};
use fracchain::dispersion::ModelParams;
use fracchain::stats::stream_rng;
use rayon::prelude::*;

fn main() -> fracchain::Result<()> {
    let model = ChainModel::new(&ModelParams::new(3.0), 128)?;
    let dt = model.default_dt();
    let states = (0..64u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(9, r);
            let mut s = chain_sim::init_thermal(&model, 1.0, 1.0, &mut rng)?;
            let s0 = s.clone();
            chain_sim::run(&mut s, dt, 400, &mut rng);
            Ok((chain_sim::energy_drift(&s0, &s), s))
        })
        .collect::<fracchain::Result<Vec<_>>>()?;
    let drift = states.iter().map(|(d, _)| d.abs()).fold(0.0, f64::max);
    println!("max relative energy drift over 400 steps: {drift:.2e}");
    let states: Vec<_> = states.into_iter().map(|(_, s)| s).collect();
    let w = chain_sim::estimate_wigner(&states, WignerKind::SpectralDensity)?;
    let mean = w.values[1..].iter().sum::<f64>() / (w.values.len() - 1) as f64;
    let spread = w.values[1..].iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    println!("spectral density (nonzero modes): mean {mean:.4}, max deviation {spread:.4}");
    Ok(())
}
