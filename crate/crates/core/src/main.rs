fn main() {
    std::process::exit(qposit::cli::run(std::env::args_os()));
}
