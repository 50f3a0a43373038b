//! `h^{3/2} Tr(S_h^k - I)` against its predicted limit for two step sizes.
//! The second table takes about ten seconds.

use num_complex::Complex64;
use sojourn_lab::partial_waves::{build_table, TableOptions};
use sojourn_lab::potential::PotentialSpec;
use sojourn_lab::spectral::{predicted_constants_central, trace_power};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let p = predicted_constants_central(-1.0, 2, 3.0)?;
    let hs = [0.1, 0.05];
    let tables = hs
        .iter()
        .map(|&h| build_table(&spec, h, &TableOptions::default()))
        .collect::<Result<Vec<_>, _>>()?;
    for k in 1..=4i64 {
        let s: Vec<Complex64> = tables
            .iter()
            .map(|t| Ok(trace_power(t, k)? * t.h.powf(1.5)))
            .collect::<Result<_, Box<dyn std::error::Error>>>()?;
        let pred = p.predicted_trace(k);
        let extrap = s[1] + (s[1] - s[0]) / (2f64.sqrt() - 1.0);
        println!(
            "k = {k}: {:.5} , {:.5}  -> {:.5}  predicted {:.5}",
            s[0], s[1], extrap, pred
        );
    }
    Ok(())
}
