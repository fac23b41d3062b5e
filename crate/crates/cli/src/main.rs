fn main() {
    std::process::exit(cheese_cli::run(std::env::args_os()));
}
