fn main() {
    std::process::exit(polo::cli::run(std::env::args_os()));
}
