//! Decay exponents of the scattering-map shifts and the phase coefficient `g`.

use sojourn_lab::classical::{
    classical_g_fit, default_g_impacts, fit_sojourn_asymptotics, scatter_ray, TrajectoryOptions,
};
use sojourn_lab::partial_waves::eikonal_g;
use sojourn_lab::potential::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let opts = TrajectoryOptions::default();
    let impacts: Vec<f64> = (0..9).map(|k| 10f64.powf(1.0 + 0.25 * k as f64)).collect();
    let events = impacts
        .iter()
        .map(|&b| scatter_ray(&spec, &[1.0, 0.0], &[0.0, b], &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let fit = fit_sojourn_asymptotics(&events, spec.alpha, spec.epsilon())?;
    println!(
        "position shift exponent {:.4} (coefficient {:+.6})",
        fit.position.exponent, fit.position.coefficient
    );
    println!(
        "momentum shift exponent {:.4} (coefficient {:+.6})",
        fit.momentum.exponent, fit.momentum.coefficient
    );
    println!(
        "phi exponent            {:.4} (coefficient {:+.6})",
        fit.phi.exponent, fit.phi.coefficient
    );

    let g = classical_g_fit(&spec, &[1.0, 0.0], &[0.0, 1.0], &default_g_impacts(), &opts)?;
    println!(
        "g = {:.8} +- {:.1e} (outgoing parametrization {:.8})",
        g.g, g.stderr, g.g_outgoing
    );
    println!(
        "eikonal g = {:.8}",
        eikonal_g(&spec, &[1.0, 0.0], &[0.0, 1.0])
    );
    Ok(())
}
