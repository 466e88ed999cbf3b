//! Degradation between paths and a replayable rewrite trace.
//!
//! `cargo run --example degradation`

use polo::degradation::{deg_leq, DegLevels};
use polo::Path;

pub fn run() -> polo::Result<()> {
    for (a, b) in [("0011", "0101"), ("0011", "1100"), ("100", "011")] {
        let (a, b): (Path, Path) = (a.parse()?, b.parse()?);
        let v = deg_leq(&a, &b)?;
        println!("{a} vs {b}: {:?}, trace {:?}", v.direction, v.trace);
        if v.comparable() && !v.trace.is_empty() {
            println!("  replay ends at {}", v.replay(&a));
        }
    }

    let levels = DegLevels::new(6, false);
    println!("degradation pairs at n = 6: {}", levels.level(6).count());
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
