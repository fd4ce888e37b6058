fn main() {
    let code = complexkit_cli::execute(std::env::args_os());
    std::process::exit(code);
}
