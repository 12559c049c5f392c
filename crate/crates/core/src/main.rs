fn main() {
    std::process::exit(dsbp::cli::main_with_args(std::env::args_os()));
}
