//! Command-line front end for the `starbdi` library.

pub mod args;
pub mod campaign;
mod commands;
pub mod grid;
mod output;

use std::path::Path;

pub use args::{Command, RunConfig};
use campaign::{run_criterion, Scale, CRITERIA};
use output::{num, Sink};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] starbdi::Error),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    match &config.command {
        Command::Transient(a) => commands::transient(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Asymptotic(a) => commands::asymptotic(a),
        Command::Diffusion(a) => commands::diffusion(a),
        Command::Combinatorics(a) => commands::combinatorics(a),
        Command::Validate(a) => validate(a.quick, &a.only, a.out.as_deref()),
    }
}

fn validate(quick: bool, only: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    if let Some(bad) = only.iter().find(|i| !CRITERIA.contains(i)) {
        return Err(CliError::Usage(format!("no criterion {bad}; criteria are 1 to 8")));
    }
    let scale = if quick { Scale::Quick } else { Scale::Full };
    let ids: Vec<u8> = if only.is_empty() {
        CRITERIA.to_vec()
    } else {
        only.to_vec()
    };
    let mut sink = out.map(|p| Sink::open(Some(p))).transpose()?;
    if let Some(s) = sink.as_mut() {
        s.row(["criterion", "check", "value", "threshold", "status"])?;
    }
    let mut failed = Vec::new();
    for id in ids {
        let r = run_criterion(id, scale);
        println!("{r}");
        if let Some(s) = sink.as_mut() {
            for c in &r.checks {
                let status = if c.passed { "pass" } else { "fail" };
                s.row([
                    id.to_string(),
                    c.name.clone(),
                    num(c.value),
                    num(c.threshold),
                    status.into(),
                ])?;
            }
            let status = if r.elapsed <= r.budget { "pass" } else { "fail" };
            s.row([
                id.to_string(),
                "runtime_s".into(),
                num(r.elapsed.as_secs_f64()),
                num(r.budget.as_secs_f64()),
                status.into(),
            ])?;
        }
        if !r.passed() {
            failed.push(id.to_string());
        }
    }
    if let Some(s) = sink {
        s.finish()?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("criteria failed: {}", failed.join(", "))))
    }
}
