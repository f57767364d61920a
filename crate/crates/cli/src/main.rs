use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use fmc_cli::{run, Args, RunConfig};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FMC_LOG", "warn")).init();

    let args = Args::parse();
    let status = match RunConfig::from_args(args) {
        Ok(config) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            match run(&config, &mut lock) {
                Ok(code) => {
                    let _ = lock.flush();
                    code
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(status as u8)
}
