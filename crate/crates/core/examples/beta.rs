//! β-expansion weights and the β values consistent with known orders.
//!
//! `cargo run --release --example beta`

use polo::beta::{beta_weight, feasible_interval, feasible_window_pairs};
use polo::Path;

pub fn run() -> polo::Result<()> {
    let p = |s: &str| s.parse::<Path>();
    let beta = 2f64.powf(0.25);
    for s in ["0111", "1011", "1100"] {
        println!("weight of {s} at 2^(1/4): {:.4}", beta_weight(&p(s)?, beta));
    }

    println!("1100 ≼ 1011 holds for β in {}", feasible_interval(&p("1100")?, &p("1011")?)?);
    println!("1010 ≼ 0111 holds for β in {}", feasible_interval(&p("1010")?, &p("0111")?)?);

    let pairs = [(p("01")?, p("10")?), (p("1100")?, p("1011")?), (p("1010")?, p("0111")?)];
    let w = feasible_window_pairs(pairs.iter().map(|(a, b)| (a, b)))?;
    match &w.main {
        Some(c) => println!("all three: {c}"),
        None => println!("all three: no window around 1"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
