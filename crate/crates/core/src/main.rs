fn main() {
    std::process::exit(gapscope::cli::run(std::env::args_os()));
}
