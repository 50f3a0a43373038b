//! Constants of the limiting homogeneous measure.

use sojourn_lab::partial_waves::eikonal_g;
use sojourn_lab::potential::{AngularProfile, PotentialSpec};
use sojourn_lab::spectral::{
    fourier_pairing, gamma_constant_closed, gamma_constant_quadrature, predicted_constants,
    predicted_constants_central,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for g in [1.0 / 3.0, 0.5, 2.0 / 3.0] {
        println!(
            "Gamma({g:.4}): closed {:.12}, quadrature {:.12}",
            gamma_constant_closed(g),
            gamma_constant_quadrature(g, false)
        );
    }

    let p = predicted_constants_central(-1.0, 2, 3.0)?;
    println!(
        "V = 1/r^3: c = {:.10} (direct {:.10}), c1 = {}, c2 = {:.12}",
        p.c, p.c_direct, p.c1, p.c2
    );
    for k in 1..=3 {
        let (q, c) = fourier_pairing(&p, k);
        println!("  k = {k}: pairing {q:.10} closed form {c:.10}");
    }

    // A sign-changing angular profile feeds both branches.
    let spec = PotentialSpec::central(2, 3.0, 1.0).with_profile(AngularProfile::Fourier {
        a0: 0.5,
        cos: vec![1.0],
        sin: vec![],
    });
    let q = predicted_constants(&|y, e| eikonal_g(&spec, y, e), 2, 3.0, 32)?;
    println!(
        "v0 = 1/2 + cos: a1 = {:.8}, a2 = {:.8}, c = {:.8}",
        q.a1, q.a2, q.c
    );
    Ok(())
}
