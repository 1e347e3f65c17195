fn main() {
    std::process::exit(rdos_cli::args::run(std::env::args_os()));
}
