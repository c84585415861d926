fn main() {
    std::process::exit(minmax_lab::cli::main());
}
