fn main() {
    std::process::exit(cogrates::cli::main_from_env());
}
