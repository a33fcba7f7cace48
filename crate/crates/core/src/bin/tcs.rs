fn main() {
    std::process::exit(ck_tcs::cli::run(std::env::args_os()));
}
