// Pessimistic cash-flow scenarios, their NPV, and limit profiles built from
// sector quartiles of financial ratios.
//
// `cargo run --example finance_scenarios`

use smaatri::finance::{apply_scenario, npv, ScenarioSpec};
use smaatri::fixtures;

pub fn run_example() -> smaatri::Result<()> {
    let file = fixtures::cash_flows();
    let rate = file.rate.unwrap_or(0.0793);
    println!("{:<4}{:>6}{:>14}{:>14}", "co", "sev", "npv", "printed");
    for entry in &file.series {
        for severity in [0.0, 0.2, 0.4] {
            let lowered = apply_scenario(&entry.base, ScenarioSpec::new(severity)?);
            let value = npv(&lowered, rate)?;
            let printed = entry.reference_for(severity).map_or(f64::NAN, |r| r.npv);
            println!("{:<4}{severity:>6.1}{value:>14.2}{printed:>14.2}", entry.id);
        }
    }

    let model = fixtures::case_study_model();
    let derived = fixtures::sector_ratios().derive_overrides(&model.criteria)?;
    println!("\nprofiles from quartiles (b1..b4)");
    for (sector, columns) in &derived {
        for (ratio, col) in columns {
            println!("  sector {sector} {ratio:<6} {col:?}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
