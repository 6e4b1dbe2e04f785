fn main() {
    std::process::exit(mpqc::cli::main_from(std::env::args_os()));
}
