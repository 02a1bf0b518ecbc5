fn main() {
    std::process::exit(fermi_forge::cli::cli_dispatch(std::env::args_os()));
}
