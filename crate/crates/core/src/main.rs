fn main() {
    std::process::exit(trap2d::cli::run(std::env::args_os()));
}
