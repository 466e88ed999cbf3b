//! The erasure-channel order, its witnesses, and the staircase closed form.
//!
//! `cargo run --example bec_order`

use polo::bec::{bec_leq, staircase_fact};
use polo::Path;

pub fn run() -> polo::Result<()> {
    for (a, b) in [("01", "10"), ("1100", "0111"), ("1000", "0011")] {
        let (a, b): (Path, Path) = (a.parse()?, b.parse()?);
        let v = bec_leq(&a, &b)?;
        println!("{a} vs {b}: {:?}", v.relation);
        if let Some((x, y)) = v.witnesses() {
            println!("  crossing: Z_{a} < Z_{b} at {x}, Z_{b} < Z_{a} at {y}");
        }
    }

    // 1^m 0^n ≼_BEC 0^m 1^n, decided without polynomials.
    for m in 1..=3 {
        let row: Vec<u8> = (0..=8).map(|n| staircase_fact(m, n) as u8).collect();
        println!("m = {m}: n = 0..8 -> {row:?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
