use std::f64::consts::PI;

use sojourn_lab::partial_waves::{build_table, TableOptions};
use sojourn_lab::potential::PotentialSpec;
use sojourn_lab::spectral::{
    build_mu_h, dyadic_annulus_counts, mu_pair, predicted_constants_central, predicted_sector_mass,
    sector_count, weighted_basket,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let t = build_table(&spec, 0.1, &TableOptions::default())?;
    let p = predicted_constants_central(-1.0, 2, 3.0)?;

    for (a, b) in [
        (PI / 2.0, 1.5 * PI),
        (PI / 4.0, 0.75 * PI),
        (1.25 * PI, 1.75 * PI),
    ] {
        let c = sector_count(&t, a, b, 3.0)?;
        println!(
            "sector [{a:.3}, {b:.3}]: N = {}, scaled {:.4}, limit {:.4}",
            c.count,
            c.scaled,
            predicted_sector_mass(&p, a, b)?
        );
    }
    for a in dyadic_annulus_counts(&t, 3.0, 8)? {
        println!("annulus p = {}: count {}, C_p = {:.4}", a.p, a.count, a.c_p);
    }
    // Pairings with unit-norm test functions in the weighted space.
    let mu = build_mu_h(&t, 3.0)?;
    for f in weighted_basket().iter().take(4) {
        let r = mu_pair(&mu, &|z| f.eval(z), 1.0)?;
        println!(
            "<mu_h, {}> = {:.6} (tail <= {:.1e})",
            f.name, r.value, r.tail_bound
        );
    }
    Ok(())
}
