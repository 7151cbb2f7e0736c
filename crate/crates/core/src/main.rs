fn main() {
    std::process::exit(hardy_cone::cli::run(std::env::args_os()));
}
