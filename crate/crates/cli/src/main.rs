fn main() {
    std::process::exit(relief_cli::run(std::env::args_os()));
}
