fn main() {
    std::process::exit(tropical_plucker::cli::run(std::env::args_os()));
}
