fn main() {
    std::process::exit(spherocurve::cli::run(std::env::args_os()));
}
