fn main() {
    std::process::exit(hyperring_lab::cli::run(std::env::args_os()));
}
