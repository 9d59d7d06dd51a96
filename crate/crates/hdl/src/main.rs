fn main() {
    std::process::exit(hdl::cli::run(std::env::args_os()));
}
