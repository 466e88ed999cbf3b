//! Bhattacharyya maps `Z_alpha` as exact polynomials and certified
//! comparisons on [0, 1].
//!
//! `cargo run --example exact_poly`

use num_rational::BigRational;
use polo::poly::{eval_z_rational, z_compare, z_poly, Nonneg};
use polo::Path;

pub fn run() -> polo::Result<()> {
    for s in ["0", "1", "01", "10"] {
        let p: Path = s.parse()?;
        println!("Z_{s}(x) = {}", z_poly(&p));
    }

    let half = BigRational::new(1.into(), 2.into());
    let z = eval_z_rational(&"01".parse()?, &half);
    println!("Z_01(1/2) = {z}");

    // Z_01 >= Z_10 everywhere: a certificate. The reverse fails: a witness.
    let (a, b): (Path, Path) = ("01".parse()?, "10".parse()?);
    for (u, l) in [(&a, &b), (&b, &a)] {
        match z_compare(u, l) {
            Nonneg::Nonneg(c) => println!("Z_{u} >= Z_{l}: certified by {c:?}"),
            Nonneg::Negative(x) => println!("Z_{u} < Z_{l} at x = {x}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
