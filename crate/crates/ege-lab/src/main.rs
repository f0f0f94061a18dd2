use clap::Parser;
use ege_lab::cli::{run, CliArgs};

/// Exit codes: 0 success, 1 usage error, 2 verification failure,
/// 3 enumeration budget exceeded.
fn main() {
    let args = match CliArgs::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            std::process::exit(if benign { 0 } else { 1 });
        }
    };
    std::process::exit(run(args.command));
}
