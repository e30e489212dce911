//! Fractional heat flow of a Gaussian, with the profile written to `out/`.

use std::path::Path;

use fracchain::dispersion::ModelParams;
use fracchain::frac_pde::{gaussian_spectrum, FracField};
use fracchain::output::Metadata;

fn main() -> fracchain::Result<()> {
    let params = ModelParams::new(4.0);
    let field = FracField::for_params(&params, 80.0, 2048, gaussian_spectrum(1.0))?;
    for t in [0.0, 1.0, 4.0] {
        let f = field.evolve(t)?;
        let w = f.to_real_space(&[0.0, 2.0, 10.0])?;
        println!("t = {t}: mass {:.6}, W(0) {:.5}, W(2) {:.5}, W(10) {:.3e}", f.mass(), w[0], w[1], w[2]);
    }
    let out = Path::new("out");
    std::fs::create_dir_all(out)?;
    let f = field.evolve(1.0)?;
    f.write_profile(&f.to_native_grid()?, &Metadata::new("frac_pde example"), &out.join("frac_pde.csv"), &out.join("frac_pde.json"))?;
    println!("wrote out/frac_pde.csv and out/frac_pde.json");
    Ok(())
}
