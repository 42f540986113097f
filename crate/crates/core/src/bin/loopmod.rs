fn main() {
    std::process::exit(loopmod::cli::run(std::env::args_os()));
}
