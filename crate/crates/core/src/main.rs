fn main() {
    std::process::exit(covsketch::cli::run_from(std::env::args_os()));
}
