fn main() {
    std::process::exit(sepsemi::cli::main_with(std::env::args_os()));
}
