// Group run where uncertain evaluations are intervals, sampled per draw.
//
// `cargo run --example interval_evaluations`

use smaatri::{fixtures, io, reference, smaa};

pub fn run_example() -> smaatri::Result<()> {
    let project = fixtures::case_study_intervals();
    let config = smaa::RunConfig {
        draws: 4_000,
        ..project.run_config()
    };
    let report = smaa::run_smaa(&project.model, &project.group_sampler()?, &config)?.with_label("group");
    println!("{}", io::format_percent_table(&report));
    print!(
        "{}",
        reference::compare(&report, &fixtures::reference_tables().group_intervals)
    );

    let off = smaa::RunConfig {
        evaluation_sampling: false,
        ..config
    };
    match smaa::run_smaa(&project.model, &project.group_sampler()?, &off) {
        Err(e) => println!("\nwith sampling off: {e}"),
        Ok(_) => unreachable!("interval data must not run without sampling"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
