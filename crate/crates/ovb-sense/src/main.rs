fn main() -> std::process::ExitCode {
    ovb_sense::cli::main()
}
