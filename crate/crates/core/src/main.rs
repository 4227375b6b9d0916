fn main() {
    std::process::exit(xcross::cli::run(std::env::args_os()));
}
