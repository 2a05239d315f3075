fn main() {
    std::process::exit(sharpbounds::cli::run(std::env::args_os()));
}
