fn main() {
    std::process::exit(obtuse_billiards::cli::run());
}
