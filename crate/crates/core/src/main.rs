fn main() {
    std::process::exit(orthomono::cli::run(std::env::args_os()));
}
