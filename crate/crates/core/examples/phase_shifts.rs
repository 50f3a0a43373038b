//! Exact phase shifts against the eikonal value for `V = 1/r³`, `d = 2`.

use sojourn_lab::partial_waves::{bessel_order, eikonal_phase, phase_shift_nu, SolverOptions};
use sojourn_lab::potential::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let h = 0.05;
    let opts = SolverOptions::default();
    println!(
        "{:>6} {:>8} {:>22} {:>22} {:>10} {:>10}",
        "l", "b", "variable phase", "numerov", "gap", "eik rel"
    );
    for l in [0u64, 10, 40, 100, 200, 400] {
        let nu = bessel_order(l, 2);
        let b = nu * h;
        let r = phase_shift_nu(&spec, nu, h, &opts)?;
        let eik = eikonal_phase(&spec, b) / (2.0 * h);
        let rel = if b > 0.0 {
            (r.delta - eik).abs() / r.delta.abs()
        } else {
            f64::NAN
        };
        println!(
            "{l:>6} {b:>8.3} {:>22.15e} {:>22.15e} {:>10.1e} {rel:>10.2e}",
            r.delta,
            r.delta_numerov,
            (r.delta - r.delta_numerov).abs()
        );
    }
    Ok(())
}
