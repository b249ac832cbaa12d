fn main() -> std::process::ExitCode {
    approachkit::cli::main()
}
