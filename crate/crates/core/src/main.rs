fn main() {
    std::process::exit(qhkit::cli::main_with_args(std::env::args_os()));
}
