//! `thc`: command-line front end for the thermohaline transition library.
//!
//! Exit codes: 0 success, 1 tolerance or oracle failure, 2 domain error,
//! 3 divergence of a simulated trajectory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::SimulateOptions;

#[derive(Debug)]
pub enum Failure {
    Tolerance(String),
    Domain(String),
    Divergence(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Tolerance(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Divergence(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Tolerance(m) | Failure::Domain(m) | Failure::Divergence(m) => m,
        }
    }
}

impl From<thermohaline::Error> for Failure {
    fn from(e: thermohaline::Error) -> Self {
        match e {
            thermohaline::Error::Diverged { .. } => Failure::Divergence(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(format!("{e:#}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify { params, output } => commands::classify(&params, &output),
        Command::Spectrum { params, l, n, output } => commands::spectrum(&params, l, n, &output),
        Command::Pes { params, lmax, nmax, output } => commands::pes(&params, lmax, nmax, &output),
        Command::Tables { table, output } => commands::tables(table, &output),
        Command::Qsweep { shell, rmin, rmax, steps, output } => commands::qsweep(&shell, rmin, rmax, steps, &output),
        Command::Simulate { params, sigma_offset, dt, horizon, seed, x0_norm_sq, stride, output } => {
            let opts = SimulateOptions { sigma_offset, dt, horizon, seed, x0_norm_sq, stride };
            commands::simulate(&params, &opts, &output)
        }
        Command::HarmonicsCheck { max_degree, output } => commands::harmonics_check(max_degree, &output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("thc: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
