fn main() {
    std::process::exit(rigor_persist::cli::main_with_args(std::env::args_os()));
}
