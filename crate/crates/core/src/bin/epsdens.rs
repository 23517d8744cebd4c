fn main() {
    std::process::exit(epsdens::cli::main_with(std::env::args_os()));
}
