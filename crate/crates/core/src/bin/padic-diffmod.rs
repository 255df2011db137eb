fn main() {
    std::process::exit(padic_diffmod::cli::main());
}
