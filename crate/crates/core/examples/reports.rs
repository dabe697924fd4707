// Writing acceptability reports as CSV and JSON and reading the JSON back.
//
// `cargo run --example reports`

use smaatri::io::{self, ReportFormat};
use smaatri::{fixtures, smaa};

pub fn run_example() -> smaatri::Result<()> {
    let project = fixtures::case_study();
    let config = smaa::RunConfig {
        draws: 1_000,
        risk_cutoff: Some(3),
        ..project.run_config()
    };
    let reports = ["DM1", "DM2"]
        .into_iter()
        .map(|dm| Ok(smaa::run_smaa(&project.model, &project.sampler_for(dm)?, &config)?.with_label(dm)))
        .collect::<smaatri::Result<Vec<_>>>()?;

    print!("{}", io::render_csv(&reports)?);

    let dir = std::env::temp_dir().join(format!("smaatri-reports-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("dm1_dm2.json");
    io::write_report(&reports, ReportFormat::Json, &path)?;
    let back = io::read_report_json(&path)?;
    assert_eq!(back, reports);
    println!("\nJSON round trip through {} is exact", path.display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
