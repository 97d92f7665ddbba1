fn main() {
    std::process::exit(bangbox::cli::run(std::env::args_os()));
}
