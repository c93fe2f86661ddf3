fn main() {
    std::process::exit(maxflow::cli::run(std::env::args_os()));
}
