// Group weights as the componentwise range of the five decision makers, and
// draws from the uniform distribution on that box intersected with the simplex.
//
// `cargo run --example group_interval_weights`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smaatri::{fixtures, smaa};

pub fn run_example() -> smaatri::Result<()> {
    let project = fixtures::case_study();
    let bounds = project.group_bounds()?;
    for (id, b) in &bounds {
        println!("{id:<6} [{:.4}, {:.4}]", b.lo, b.hi);
    }
    let sampler = project.group_sampler()?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!();
    for _ in 0..3 {
        let w = smaa::sample_weights(&sampler, &project.model.criteria, &mut rng)?;
        let shown: Vec<String> = w.0.values().map(|x| format!("{x:.3}")).collect();
        println!("sum {:.6}: {}", w.sum(), shown.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
