fn main() {
    std::process::exit(ramify::cli::main_entry());
}
