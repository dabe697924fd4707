// Exact λ step functions per decision maker: which λ ranges send each
// company to which class, and whether the sequence is fragile.
//
// `cargo run --example lambda_fragility`

use smaatri::electre::{fragility, AssignmentRule};
use smaatri::{fixtures, smaa};

pub fn run_example() -> smaatri::Result<()> {
    let project = fixtures::case_study();
    for rule in AssignmentRule::ALL {
        println!("rule {rule}");
        for dm in fixtures::DM_IDS {
            let table = smaa::breakpoint_table(&project.model, &fixtures::published_weights(dm), rule)?;
            for (alt, intervals) in project.model.alternatives.iter().zip(&table) {
                let steps: Vec<String> = intervals
                    .iter()
                    .map(|iv| {
                        format!(
                            "{}{:.3},{:.3}{}→C{}",
                            if iv.lo_closed { '[' } else { '(' },
                            iv.lo,
                            iv.hi,
                            if iv.hi_closed { ']' } else { ')' },
                            iv.category
                        )
                    })
                    .collect();
                let f = fragility(intervals);
                let flag = if f.is_fragile() { "  fragile" } else { "" };
                println!("  {dm} {}: {}{flag}", alt.id, steps.join(" "));
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
