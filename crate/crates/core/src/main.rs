fn main() {
    std::process::exit(ghzwl::cli::run(std::env::args_os()));
}
