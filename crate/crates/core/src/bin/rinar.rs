fn main() {
    std::process::exit(rinar::cli::dispatch(std::env::args_os()));
}
