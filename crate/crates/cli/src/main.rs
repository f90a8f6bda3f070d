fn main() {
    std::process::exit(ssd_cli::run(std::env::args_os()));
}
