fn main() {
    std::process::exit(lhz_jpo::cli::run(std::env::args_os()));
}
