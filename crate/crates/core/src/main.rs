fn main() {
    std::process::exit(gadgetforge::cli_io::run(std::env::args_os()));
}
