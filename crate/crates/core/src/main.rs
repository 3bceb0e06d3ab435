fn main() {
    std::process::exit(ordinals::cli::run(std::env::args_os()));
}
