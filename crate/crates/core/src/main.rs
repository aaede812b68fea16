fn main() {
    std::process::exit(toric_verify::cli::main_exit_code());
}
