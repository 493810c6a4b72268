fn main() {
    std::process::exit(conic_schemes::cli::run_from(std::env::args_os()));
}
