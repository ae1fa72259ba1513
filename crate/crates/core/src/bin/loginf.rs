fn main() {
    std::process::exit(logic_infimum::cli::run());
}
