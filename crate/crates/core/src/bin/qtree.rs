fn main() {
    std::process::exit(qtree::cli::main_with(std::env::args_os()));
}
