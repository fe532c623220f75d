fn main() {
    std::process::exit(jetflow::cli::run());
}
