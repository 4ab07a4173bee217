fn main() {
    std::process::exit(algobias::cli::cli_main(std::env::args_os()));
}
