use std::process::ExitCode;

use al_ist_cli::{configure_threads, emit, run, JobSpec};
use clap::Parser;

fn main() -> ExitCode {
    let job = JobSpec::parse();
    let result = configure_threads().and_then(|()| {
        let outcome = run(&job)?;
        emit(&job, &outcome.output)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
