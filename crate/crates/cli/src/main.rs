fn main() {
    std::process::exit(skewtail_cli::main_with(std::env::args_os()));
}
