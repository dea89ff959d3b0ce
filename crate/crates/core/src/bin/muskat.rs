fn main() {
    std::process::exit(muskat::cli::run(std::env::args_os()));
}
