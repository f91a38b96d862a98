fn main() {
    let code = hypersum::cli::run(std::env::args_os());
    std::process::exit(code);
}
