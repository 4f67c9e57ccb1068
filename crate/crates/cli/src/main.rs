use std::process::ExitCode;

use clap::Parser;
use pad_sim::{execute, Args};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match args.into_spec().and_then(|spec| execute(&spec)) {
        Ok(Some(path)) => {
            log::info!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pad-sim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
