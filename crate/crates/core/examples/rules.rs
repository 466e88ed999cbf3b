//! Backward derivations with proof trees, and forward saturation.
//!
//! `cargo run --release --example rules`

use polo::rules::{derive_pair, saturate, RelKind, RuleSet, SaturateBudget};
use polo::Path;

pub fn run() -> polo::Result<()> {
    let rules = RuleSet::default();
    for (w, b, kind) in [
        ("101010011", "101001111", RelKind::Z),
        ("110100", "101111", RelKind::P),
        ("0110", "1001", RelKind::Bec),
    ] {
        let (w, b): (Path, Path) = (w.parse()?, b.parse()?);
        match derive_pair(&w, &b, kind, &rules)? {
            Some(r) => {
                assert!(r.verify());
                print!("{}", r.to_text());
            }
            None => println!("{w} {} {b}: undecided", kind.symbol()),
        }
    }

    let store = saturate(5, &rules, SaturateBudget::default())?;
    for kind in [RelKind::Deg, RelKind::Z, RelKind::P, RelKind::Bec] {
        println!("n = 5, {kind}: {} pairs", store.matrix(5, kind).count());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
