fn main() {
    std::process::exit(isonlcs::cli::run(std::env::args_os()));
}
