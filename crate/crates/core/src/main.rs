fn main() {
    std::process::exit(edwsax::cli::run(std::env::args_os()));
}
