fn main() {
    std::process::exit(jumprate::harness::cli::cli_main(std::env::args_os()));
}
