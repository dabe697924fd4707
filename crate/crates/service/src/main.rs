fn main() {
    std::process::exit(smaatri_service::cli::main(std::env::args_os()));
}
