//! SC decoding over a BiAWGN sweep and genie estimates of one synthetic
//! channel.
//!
//! `cargo run --release --example simulate`

use polo::sim::{awgn_sweep, build_info_set, genie_estimate, simulate, write_csv, Channel, Decoder, Method};

pub fn run() -> polo::Result<()> {
    let info = build_info_set(7, 64, &Method::Beta(2f64.powf(0.25)), &[])?;
    let points = awgn_sweep(&[1.0, 2.0, 3.0], 0.5)?;
    let results = simulate(&points, &info, 2000, 42, Decoder::Exact)?;
    write_csv(&results, std::io::stdout())?;

    let g = genie_estimate(Channel::bsc(0.1)?, &"10".parse()?, 20_000, 7)?;
    println!("BSC(0.1), path 10: Z ~ {:.4} ± {:.4}, T ~ {:.4} ± {:.4}", g.z, g.z_se, g.t, g.t_se);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polo::Result<()> {
    run()
}
