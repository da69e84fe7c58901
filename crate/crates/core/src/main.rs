fn main() {
    std::process::exit(elastic_ite::cli_io::run(std::env::args_os()));
}
