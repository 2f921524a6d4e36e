fn main() {
    std::process::exit(uniform_channel::cli::main_with_args(std::env::args_os()));
}
