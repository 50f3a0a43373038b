use sojourn_lab::classical::{deflection_central, scatter_ray, turning_point, TrajectoryOptions};
use sojourn_lab::potential::PotentialSpec;

// Quadrature, trajectory and the impulse approximation 2c/η³ side by side.
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    println!(
        "{:>8} {:>16} {:>16} {:>12} {:>14}",
        "eta", "quadrature", "trajectory", "2/eta^3", "r_m/eta - 1"
    );
    for eta in [2.0, 5.0, 10.0, 30.0, 100.0] {
        let q = deflection_central(&spec, eta)?;
        let t = scatter_ray(
            &spec,
            &[1.0, 0.0],
            &[0.0, eta],
            &TrajectoryOptions::default(),
        )?;
        let (ratio, _) = turning_point(&spec, eta)?;
        println!(
            "{eta:>8} {:>16.10e} {:>16.10e} {:>12.4e} {:>14.6e}",
            q.sigma,
            t.deflection(),
            2.0 / eta.powi(3),
            ratio
        );
    }
    Ok(())
}
