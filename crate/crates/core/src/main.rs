fn main() {
    std::process::exit(hsangle::cli::run(std::env::args_os()));
}
