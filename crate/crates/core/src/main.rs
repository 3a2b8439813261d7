fn main() {
    std::process::exit(grasslattice::cli::run(std::env::args_os()));
}
