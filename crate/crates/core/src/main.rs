fn main() {
    std::process::exit(aajoin::cli::run(std::env::args_os()));
}
