fn main() {
    std::process::exit(moid::cli::main_with(std::env::args_os()));
}
