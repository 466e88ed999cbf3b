//! The command-line interface driven in-process.
//!
//! `cargo run --example cli -- compare 1100 1011 --relation z`

pub fn run() -> polo::Result<()> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = polo::cli::run_with(["polo", "compare", "1100", "1011", "--relation", "z"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    assert_eq!(code, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let args: Vec<String> = std::env::args().collect();
    if args.len() > 1 {
        std::process::exit(polo::cli::run(std::iter::once("polo".to_string()).chain(args[1..].iter().cloned())));
    }
    run().expect("example runs");
}
