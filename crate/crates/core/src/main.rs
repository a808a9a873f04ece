fn main() -> std::process::ExitCode {
    lecho::harness::cli::main()
}
