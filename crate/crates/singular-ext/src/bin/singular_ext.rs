fn main() {
    std::process::exit(singular_ext::cli::run());
}
