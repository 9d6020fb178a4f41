fn main() {
    std::process::exit(specgen::cli::run());
}
