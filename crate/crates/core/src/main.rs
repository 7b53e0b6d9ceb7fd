fn main() {
    std::process::exit(bimodulus::cli::run(std::env::args_os()));
}
