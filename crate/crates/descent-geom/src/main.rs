fn main() {
    std::process::exit(descent_geom::cli::run(std::env::args_os()));
}
