fn main() {
    std::process::exit(rice_ie_cli::run(std::env::args_os()));
}
