fn main() {
    std::process::exit(inqmc::cli::run(std::env::args_os()));
}
