fn main() -> std::process::ExitCode {
    dyndeg::cli::main()
}
