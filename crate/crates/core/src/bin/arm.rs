fn main() {
    std::process::exit(arm_core::cli::run_cli(std::env::args_os()));
}
