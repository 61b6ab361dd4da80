fn main() {
    let (code, text) = hypertoric_cli::run(std::env::args_os());
    if code == hypertoric_cli::EXIT_USAGE {
        eprintln!("{}", text.trim_end());
    } else {
        println!("{}", text.trim_end());
    }
    std::process::exit(code);
}
