//! Information sets from exact BEC parameters, β-expansion, or a
//! reliability sequence with swaps.
//!
//! `cargo run --example construct`

use num_rational::BigRational;
use polo::sim::{bec_exact_params, build_info_set, Method};

pub fn run() -> polo::Result<()> {
    let half = BigRational::new(1.into(), 2.into());
    let z = bec_exact_params(3, &half)?;
    for (i, v) in z.iter().enumerate() {
        println!("index {i} ({i:03b}): Z = {v}");
    }

    let by_bec = build_info_set(3, 4, &Method::Bec(half), &[])?;
    let by_beta = build_info_set(3, 4, &Method::Beta(2f64.powf(0.25)), &[])?;
    println!("BEC(1/2), K = 4: {:?}", by_bec.indices);
    println!("beta,     K = 4: {:?}", by_beta.indices);

    // A hand-written sequence (ascending reliability) and one swap.
    let seq = vec![0, 1, 2, 4, 3, 5, 6, 7];
    let s = build_info_set(3, 4, &Method::Sequence(seq), &[(3, 4)])?;
    println!("sequence with 3 -> 4: {:?}", s.indices);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
