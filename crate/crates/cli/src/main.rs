fn main() {
    std::process::exit(goldbach_cli::run(std::env::args_os().skip(1)));
}
