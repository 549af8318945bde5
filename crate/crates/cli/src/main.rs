fn main() {
    std::process::exit(q2color_cli::main_with_args(std::env::args_os()));
}
