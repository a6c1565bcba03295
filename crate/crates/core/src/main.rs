fn main() -> std::process::ExitCode {
    dialog_complexity::cli::main()
}
