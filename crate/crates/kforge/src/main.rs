fn main() {
    std::process::exit(kforge::cli::run(std::env::args_os()));
}
