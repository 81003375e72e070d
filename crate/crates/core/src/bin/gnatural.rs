fn main() {
    std::process::exit(gnatural_core::cli_reports::main_with_args(std::env::args_os()));
}
