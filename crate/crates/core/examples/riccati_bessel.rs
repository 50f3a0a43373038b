use sojourn_lab::partial_waves::{free_phase, riccati_bessel_with_method};

fn main() {
    println!(
        "{:>7} {:>8} {:>17} {:>24} {:>24} {:>12}",
        "nu", "x", "method", "j", "n", "W - 1"
    );
    for (nu, x) in [
        (0.5, 1.0),
        (10.0, 5.0),
        (100.0, 101.0),
        (1000.0, 3000.0),
        (2000.0, 1500.0),
        (3.0, 2500.0),
    ] {
        let (rb, m) = riccati_bessel_with_method(nu, x);
        let (j, n, _, _) = rb.unscaled();
        println!(
            "{nu:>7} {x:>8} {:>17} {j:>24.16e} {n:>24.16e} {:>12.2e}",
            format!("{m:?}"),
            rb.wronskian() - 1.0
        );
    }
    // The continuous phase of (n̂, ĵ) tends to x - νπ/2 + π/4.
    let nu = 20.0;
    for x in [30.0, 300.0, 3000.0] {
        let rb = riccati_bessel_with_method(nu, x).0;
        let th = free_phase(nu, x, &rb);
        println!(
            "theta({nu}, {x}) = {th:.12}, x - nu pi/2 + pi/4 = {:.12}",
            x - nu * std::f64::consts::FRAC_PI_2 + std::f64::consts::FRAC_PI_4
        );
    }
}
