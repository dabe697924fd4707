// DM1's card deck turned into weights with the revised Simos procedure.
//
// `cargo run --example simos_weights`

use smaatri::fixtures;
use smaatri::simos::{preorder_check, simos_resolve};

pub fn run_example() -> smaatri::Result<()> {
    let deck = fixtures::dm1_deck();
    let out = simos_resolve(&deck)?;
    println!(
        "e = {}, u = {:.4}, K' = {:.4}",
        out.gaps.iter().sum::<u32>(),
        out.unit,
        out.total
    );
    for (rank, k) in deck.ranks.iter().zip(&out.rank_weights) {
        println!("k = {k:7.4}  {}", rank.join(", "));
    }
    let printed = fixtures::published_weights("DM1");
    println!("\ncriterion   weight  printed");
    for (id, w) in &out.weights.0 {
        println!("{id:<10} {w:7.4} {:8.3}", printed.get(id).unwrap_or(f64::NAN));
    }
    let order = preorder_check(&deck);
    println!("\n{order}");
    assert!(order.is_consistent_with(&out.weights));
    Ok(())
}

#[allow(dead_code)]
fn main() -> smaatri::Result<()> {
    run_example()
}
