fn main() {
    std::process::exit(quadline::cli::main_exit_code());
}
