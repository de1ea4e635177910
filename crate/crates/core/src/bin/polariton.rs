fn main() {
    std::process::exit(polariton::io::cli::main_exit_code());
}
