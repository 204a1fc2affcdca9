fn main() {
    std::process::exit(hwk_cli::main_with_args(std::env::args_os()));
}
