fn main() {
    std::process::exit(lwe_prng::cli::run(std::env::args_os()));
}
