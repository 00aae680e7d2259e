fn main() {
    std::process::exit(weightsmith::cli::run());
}
