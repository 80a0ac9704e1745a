fn main() {
    std::process::exit(ipl::cli::run(std::env::args_os()));
}
