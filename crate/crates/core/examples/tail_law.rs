//! Tail of the flight length: `N P(tau |omega'(K)| > lambda N(theta))`
//! against its limit `C* lambda^-alpha`.

use fracchain::dispersion::ModelParams;
use fracchain::kinetic_mc;

fn main() -> fracchain::Result<()> {
    for theta in [2.5, 3.0, 4.0] {
        let params = ModelParams::new(theta);
        println!("theta = {theta}");
        for lambda in [0.5, 1.0, 2.0, 4.0] {
            let s = kinetic_mc::tail_statistic(&params, 1e12, lambda)?;
            let l = kinetic_mc::tail_limit(&params, lambda)?;
            println!("  lambda {lambda:4}: statistic {s:.5e}, limit {l:.5e}, ratio {:.4}", s / l);
        }
    }
    Ok(())
}
