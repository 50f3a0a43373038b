use sojourn_lab::potential::{check_symbol_decay, Correction, CorrectionTerm, PotentialSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let radii: Vec<f64> = (0..7).map(|k| 10f64.powf(1.0 + 0.5 * k as f64)).collect();
    let cases = [
        (
            "r^-4",
            CorrectionTerm::Power {
                coeff: 0.3,
                exponent: 4.0,
            },
            1.0,
        ),
        (
            "r^-3.5 sin(ln r)",
            CorrectionTerm::PowerSinLog {
                coeff: 0.3,
                exponent: 3.5,
            },
            0.5,
        ),
        (
            "r^-3 sin(ln r), declared eps 0.5",
            CorrectionTerm::PowerSinLog {
                coeff: 0.3,
                exponent: 3.0,
            },
            0.5,
        ),
    ];
    for (name, term, epsilon) in cases {
        let spec = PotentialSpec::central(2, 3.0, 1.0).with_correction(Correction {
            epsilon,
            terms: vec![term],
        });
        let rep = check_symbol_decay(&spec, &radii, 3)?;
        let fitted: Vec<String> = rep
            .orders
            .iter()
            .map(|o| format!("{:.2}", o.exponent))
            .collect();
        println!(
            "{name:<34} pass = {:<5} exponents [{}]",
            rep.pass,
            fitted.join(", ")
        );
    }
    Ok(())
}
