fn main() {
    defectlab::cli::init_threads();
    std::process::exit(defectlab::cli::main_with(std::env::args_os()));
}
