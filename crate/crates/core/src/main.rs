fn main() {
    std::process::exit(agvroute::cli::dispatch(std::env::args_os()));
}
