fn main() {
    std::process::exit(modcomp::cli::run(std::env::args_os()));
}
