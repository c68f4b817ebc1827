fn main() {
    std::process::exit(floerkit_cli::run(std::env::args_os()));
}
