fn main() {
    std::process::exit(adhesive::cli::run(std::env::args_os()));
}
