use std::io::Write;

fn main() {
    let verbose = std::env::args().any(|a| a == "-v" || a == "--verbose" || a.starts_with("-vv"));
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if verbose {
        "info"
    } else {
        "warn"
    }))
    .target(env_logger::Target::Stderr)
    .init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = fp2ria_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    std::process::exit(code);
}
