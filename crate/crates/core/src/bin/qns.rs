fn main() {
    std::process::exit(qns_core::cli::run_cli(std::env::args_os()));
}
