fn main() {
    std::process::exit(wolstenholme::cli::run(std::env::args_os()));
}
