fn main() {
    std::process::exit(hecop::cli::run());
}
