fn main() {
    std::process::exit(junctionlab::cli::run(std::env::args_os()));
}
