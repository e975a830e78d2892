fn main() {
    std::process::exit(mdhp_cli::run());
}
