//! Building, summarising and exporting the relation database.
//!
//! `cargo run --release --example podb [n]`

use polo::podb::{self, BuildConfig, Format};
use polo::rules::RelKind;

pub fn run_n(n: usize) -> polo::Result<()> {
    let (db, report) = podb::build(n, &BuildConfig::for_n(n))?;
    let s = podb::stats(&db);
    println!("n = {n} in {:.2}s: {} pairs", report.seconds, s.total_pairs);
    println!("  degradation     {}", s.deg);
    println!("  criterion       {}", s.z_criterion);
    println!("  new beyond deg  {}", s.z_new);
    println!("  unknown         {}", s.unknown);

    let mut bin = Vec::new();
    podb::write_binary(&db, &mut bin)?;
    assert_eq!(podb::read_binary(&bin[..])?, db);
    let mut dot = Vec::new();
    podb::export(&db, Format::Dot, RelKind::Z, &mut dot)?;
    println!("binary {} bytes, Hasse diagram {} bytes", bin.len(), dot.len());
    Ok(())
}

pub fn run() -> polo::Result<()> {
    run_n(6)
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    let n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    run_n(n)
}
