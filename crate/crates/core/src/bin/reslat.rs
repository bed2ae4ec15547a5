fn main() {
    std::process::exit(reslat::cli::main_with_args(std::env::args_os()));
}
