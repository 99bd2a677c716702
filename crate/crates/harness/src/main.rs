fn main() {
    std::process::exit(machlimit::cli::main_with_args(std::env::args_os()));
}
