fn main() {
    std::process::exit(reqtrace::cli::main_with_args(std::env::args_os()));
}
