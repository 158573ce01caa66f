fn main() {
    env_logger::init();
    std::process::exit(remod::cli::main_with(std::env::args_os()));
}
