//! Path syntax and the index conventions.
//!
//! `cargo run --example paths`

use polo::path::{index_to_path, path_to_index};
use polo::{BitOrder, ChannelIndex, Convention, Path};

pub fn run() -> polo::Result<()> {
    let a: Path = "0^2 1^{3}0".parse()?;
    println!("{a}  (length {}, code {})", a.len(), a.code());
    println!("inverted {}  reversed {}", a.invert(), a.reversed());

    // Index 719 of N = 1024 under each convention.
    for c in Convention::ALL {
        println!("{c:>16}: label 719 -> {}", c.path_of(719, 10)?);
    }

    let i = ChannelIndex::new(4, 6)?;
    for order in [BitOrder::Msb, BitOrder::Lsb] {
        let p = index_to_path(i, order);
        assert_eq!(path_to_index(&p, order), i);
        println!("{order:?}: 6 -> {p}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
