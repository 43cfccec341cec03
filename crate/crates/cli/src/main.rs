fn main() {
    std::process::exit(linvar_cli::run(std::env::args_os()));
}
