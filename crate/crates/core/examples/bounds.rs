//! Channel-independent criteria for `≼_Z` and `≼_P`, and enclosures of
//! `Z` and `T` for a general channel.
//!
//! `cargo run --example bounds`

use polo::bounds::{count_check, prove_p, prove_z, staircase_z_check, t_interval, z_interval, CountMode, Interval, Kind};
use polo::Path;

pub fn run() -> polo::Result<()> {
    for (w, b) in [("100", "011"), ("1100", "1011"), ("1010", "0111")] {
        let (w, b): (Path, Path) = (w.parse()?, b.parse()?);
        let r = prove_z(&w, &b)?;
        let s = r.first().expect("criterion always reports its shape");
        println!(
            "{w} ≼_Z {b}: {} via {} from {} ≼_BEC {} (degree {})",
            r.proven,
            s.strategy.name(),
            s.premise.0,
            s.premise.1,
            s.residual_degree()
        );
    }

    let r = prove_p(&"110100".parse()?, &"101111".parse()?)?;
    println!("110100 ≼_P 101111: {} ({} strategies)", r.proven, r.steps.len());

    println!("0 1 ≼_Z 1 0 by the staircase check: {}", staircase_z_check(0, 1, 1, 0)?);
    let a: Path = "11011011".parse()?;
    let g: Path = "00000011".parse()?;
    println!("{g} ≼_Z {a} by counting: {}", count_check(&a, &g, Kind::Z, CountMode::Chain)?);

    // BSC(0.1): Z = 0.6, T = 0.2.
    let z = Interval::parse("0.6")?;
    let t = Interval::parse("0.2")?;
    let alpha: Path = "10".parse()?;
    println!("Z(W^10) in {}", z_interval(&alpha, &z));
    println!("T(W^10) in {}", t_interval(&alpha, &t, Some(&z))?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
