fn main() {
    std::process::exit(farrow::cli::run(std::env::args_os()));
}
