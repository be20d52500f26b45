fn main() {
    std::process::exit(rlat_cli::parse_and_dispatch(std::env::args_os()));
}
