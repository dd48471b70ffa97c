fn main() {
    std::process::exit(cfspectra_cli::run(std::env::args_os()));
}
