//! `a_eps` approaching `lambda + C |p|^alpha` as eps decreases.

use fracchain::dispersion::ModelParams;
use fracchain::resolvent;

fn main() -> fracchain::Result<()> {
    let eps: Vec<f64> = (2..=7).map(|j| 10f64.powi(-j)).collect();
    for theta in [2.5, 4.0] {
        let params = ModelParams::new(theta);
        println!("theta = {theta}, alpha = {:.4}, C = {:.6}", resolvent::stable_index(theta), resolvent::c_big(&params)?);
        for row in resolvent::sweep(&params, &eps, 1.0, 1.0)? {
            println!("  eps {:8.1e}  a_eps {:.8}  I_eps {:.6e}  rel err {:.3e}", row.eps, row.a_eps, row.i_eps, row.rel_error);
        }
    }
    Ok(())
}
