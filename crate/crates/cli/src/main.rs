fn main() {
    std::process::exit(tangent_cli::main_with_args(std::env::args_os()));
}
