use sojourn_lab::partial_waves::{build_table, ShiftSource, TableOptions};
use sojourn_lab::potential::PotentialSpec;

// Hybrid exact/eikonal table and its closed-form tail.
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = PotentialSpec::central(2, 3.0, 1.0);
    let t = build_table(&spec, 0.1, &TableOptions::default())?;
    println!(
        "h = {}: {} exact entries, crossover l* = {:?} (error {:.2e})",
        t.h,
        t.exact.len(),
        t.l_star,
        t.crossover_error
    );
    println!(
        "eikonal entries up to l_max = {:?} ({} in total)",
        t.l_max,
        t.len()
    );
    println!(
        "tail bound {:.3e}, signed tail {:.3e}, method gap {:.1e}",
        t.tail_bound, t.tail_sum, t.max_method_gap
    );
    for e in t
        .iter()
        .filter(|e| [0, 5, 20, 50].contains(&e.l) || e.l == t.l_star.unwrap_or(0) + 1)
    {
        let tag = if e.method == ShiftSource::Exact {
            "exact"
        } else {
            "eikonal"
        };
        println!(
            "  l = {:>5}  b = {:>7.2}  delta = {:+.12e}  ({tag}, mult {})",
            e.l, e.b, e.delta, e.mult
        );
    }
    Ok(())
}
