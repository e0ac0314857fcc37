use std::process::ExitCode;

fn main() -> ExitCode {
    let cfg = match qrperm_cli::parse_config(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(e) => return e.report(),
    };
    match qrperm_cli::run(&cfg) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
