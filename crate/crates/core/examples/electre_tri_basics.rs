// Credibility of Company A against each limit profile under DM1's weights,
// and where the three assignment rules put it.
//
// `cargo run --example electre_tri_basics`

use smaatri::electre::{self, AssignmentRule, OutrankingScores};
use smaatri::fixtures;

pub fn run_example() -> smaatri::Result<()> {
    let model = fixtures::case_study_model();
    let weights = fixtures::published_row("DM1");
    let rows = fixtures::point_rows(&model);
    let a = &model.alternatives[0];
    let profiles = model.profiles.matrix(&model.criteria, a.sector.as_deref())?;

    let c = electre::concordance(&rows[0], &profiles[3], &model.criteria, &weights)?;
    println!("C({}, b4) = {c:.3}", a.id);

    let scores = OutrankingScores::compute(&rows[0], &profiles, &model.criteria, &weights);
    for (h, (up, down)) in scores.sigma_up.iter().zip(&scores.sigma_down).enumerate() {
        println!("b{}: σ(a,b) = {up:.3}   σ(b,a) = {down:.3}", h + 1);
    }
    for lambda in [0.65, 0.70, 0.75, 0.85] {
        let cats: Vec<String> = AssignmentRule::ALL
            .iter()
            .map(|&rule| Ok(format!("{rule}: C{}", electre::assign(&scores, lambda, rule)?)))
            .collect::<smaatri::Result<_>>()?;
        println!("λ = {lambda:.2}  {}", cats.join("  "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
