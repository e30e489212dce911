//! Spreading of a localized temperature excess. Each hot chain is paired with
//! a T = 1 chain sharing its random numbers, and the spatial variance of the
//! excess energy is tracked in time.

use fracchain::chain_sim::{self, ChainModel, ChainState, WignerKind};
use fracchain::dispersion::ModelParams;
use fracchain::stats::stream_rng;
use rayon::prelude::*;

fn main() -> fracchain::Result<()> {
    let model = ChainModel::new(&ModelParams::new(4.0), 256)?;
    let dt = model.default_dt();
    let hot = |x: f64| 1.0 + 9.0 * (-((x - 0.5) / 0.02).powi(2)).exp();
    let times = [0.0, 2.0, 4.0, 8.0];
    let runs: Vec<Vec<(ChainState, ChainState)>> = (0..100u64)
        .into_par_iter()
        .map(|r| {
            let mut rng_hot = stream_rng(14, r);
            let mut rng_ref = rng_hot.clone();
            let mut s = chain_sim::init_local_thermal(&model, hot, 1.0, &mut rng_hot)?;
            let mut c = chain_sim::init_thermal(&model, 1.0, 1.0, &mut rng_ref)?;
            let mut snaps = vec![(s.clone(), c.clone())];
            for w in times.windows(2) {
                let steps = ((w[1] - w[0]) / dt).round() as usize;
                chain_sim::run(&mut s, dt, steps, &mut rng_hot);
                chain_sim::run(&mut c, dt, steps, &mut rng_ref);
                snaps.push((s.clone(), c.clone()));
            }
            Ok(snaps)
        })
        .collect::<fracchain::Result<_>>()?;
    for (i, t) in times.iter().enumerate() {
        let hot_states: Vec<_> = runs.iter().map(|r| r[i].0.clone()).collect();
        let ref_states: Vec<_> = runs.iter().map(|r| r[i].1.clone()).collect();
        let excess = chain_sim::estimate_wigner_excess(&hot_states, &ref_states, WignerKind::EnergyProfile)?;
        println!("t = {t}: variance of the excess profile {:.4e}", chain_sim::profile_variance(&excess, 0.0, 0.5));
    }
    Ok(())
}
