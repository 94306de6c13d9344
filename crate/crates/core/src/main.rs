fn main() {
    std::process::exit(hyperphase::cli::main());
}
