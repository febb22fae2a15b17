fn main() {
    std::process::exit(tedst::cli::run(std::env::args_os()));
}
