fn main() {
    std::process::exit(hamcheck::cli::main_with_args(std::env::args_os()));
}
