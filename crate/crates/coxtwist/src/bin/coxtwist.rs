fn main() {
    std::process::exit(coxtwist::cli::run());
}
