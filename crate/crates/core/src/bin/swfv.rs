fn main() {
    std::process::exit(swfv::harness::cli_main(std::env::args_os()));
}
