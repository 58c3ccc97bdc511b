fn main() {
    std::process::exit(qso_core::cli::run(std::env::args_os()));
}
