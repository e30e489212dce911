//! Tabulates the dispersion relation and compares `a_hat` with its small-k
//! leading term for a few values of theta.

use fracchain::dispersion::{self, Dispersion, ModelParams};

fn main() -> fracchain::Result<()> {
    for theta in [2.5, 3.0, 4.0] {
        let params = ModelParams::new(theta);
        let d = Dispersion::new(&params)?;
        let c = dispersion::c_theta(&params)?;
        println!("theta = {theta}, c_theta = {c:.6}");
        println!("{:>10} {:>14} {:>14} {:>12}", "k", "omega", "omega'", "lead err");
        for j in [2, 4, 8, 12, 16] {
            let k = 2f64.powi(-j);
            let s = d.sample(k)?;
            let err = (d.a_hat(k) - dispersion::a_hat_leading(&params, c, k)).abs() / d.a_hat(k);
            println!("{k:>10.3e} {:>14.6e} {:>14.6e} {err:>12.3e}", s.omega, s.omega_prime);
        }
        println!();
    }
    Ok(())
}
