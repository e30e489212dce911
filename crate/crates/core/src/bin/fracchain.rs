fn main() {
    std::process::exit(fracchain::cli::main_with_args(std::env::args_os()));
}
