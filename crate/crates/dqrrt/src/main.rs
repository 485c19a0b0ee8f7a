fn main() {
    std::process::exit(dqrrt::cli::run(std::env::args_os()));
}
