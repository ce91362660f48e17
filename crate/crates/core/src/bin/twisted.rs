fn main() {
    std::process::exit(twisted_core::cli::run_from(std::env::args_os()));
}
