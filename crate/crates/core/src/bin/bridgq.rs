fn main() {
    std::process::exit(bridgq::cli::main());
}
