fn main() {
    std::process::exit(kolmax::cli::main_from_env());
}
