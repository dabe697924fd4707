// Acceptabilities of the four start-ups for each decision maker, then for the
// group with interval weights spanning all five.
//
// `cargo run --example smaa_case_study`

use smaatri::{fixtures, io, reference, smaa};

pub fn run_example() -> smaatri::Result<()> {
    let project = fixtures::case_study();
    let refs = fixtures::reference_tables();
    let config = smaa::RunConfig {
        draws: 4_000,
        ..project.run_config()
    };

    for dm in fixtures::DM_IDS {
        let report = smaa::run_smaa(&project.model, &project.sampler_for(dm)?, &config)?.with_label(dm);
        println!("{dm}\n{}", io::format_percent_table(&report));
        let deviation = reference::compare(&report, &refs.per_dm[dm]);
        println!(
            "max deviation from the published table: {:.2}\n",
            deviation.max_abs_delta()
        );
    }

    let group = smaa::run_smaa(&project.model, &project.group_sampler()?, &config)?.with_label("group");
    println!("group (interval weights)\n{}", io::format_percent_table(&group));
    print!("{}", reference::compare(&group, &refs.group));
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
