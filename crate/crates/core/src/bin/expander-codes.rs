fn main() {
    std::process::exit(expander_codes::cli::run(std::env::args_os().skip(1)));
}
