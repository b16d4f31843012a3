fn main() {
    std::process::exit(kernel_forge::cli::run(std::env::args_os()));
}
