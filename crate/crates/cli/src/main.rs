fn main() {
    std::process::exit(gqd_cli::run(std::env::args_os()));
}
