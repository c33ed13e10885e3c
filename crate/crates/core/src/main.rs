fn main() -> std::process::ExitCode {
    radiocast::cli::main()
}
