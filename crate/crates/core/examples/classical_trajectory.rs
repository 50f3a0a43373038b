//! Scatter one ray off `V = 1/r³` and print the outgoing data.

use sojourn_lab::classical::{extract_asymptotics, integrate_trajectory, TrajectoryOptions};
use sojourn_lab::potential::PotentialSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let opts = TrajectoryOptions::default();
    for b in [2.0, 10.0, 100.0] {
        let traj = integrate_trajectory(&spec, &[1.0, 0.0], &[0.0, b], &opts)?;
        let ev = extract_asymptotics(&traj)?;
        println!(
            "b = {b:>6}: deflection {:+.6e}  |eta| {:.10}  tau {:+.6e}  phi {:+.6e}  r_min {:.6}  steps {}  drift {:.1e}",
            ev.deflection(),
            ev.impact(),
            ev.tau,
            ev.phi,
            traj.perihelion,
            traj.samples.len(),
            ev.energy_drift.max(ev.angular_momentum_drift),
        );
    }
    Ok(())
}
