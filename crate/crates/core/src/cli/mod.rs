//! The `tcs` command line: trajectories, observables, wave functions,
//! minimization instants and the verification battery as CSV or JSON lines.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{num, parse_tol, Format, RunConfig, StateArg, UsageError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tcs",
    version,
    about = "Trajectory-coherent states of the damped oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Classical trajectory, variational pair, action and energy per time.
    Trajectory,
    /// Means, variances, uncertainty product and g(t) per time.
    Observables,
    /// Wave function samples at t0.
    Wavefunction,
    /// Minimization instants of the uncertainty product; --solve-mu queries.
    Minimize,
    /// Runs the verification battery; exits 1 if any check fails.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Trajectory => "trajectory",
            Command::Observables => "observables",
            Command::Wavefunction => "wavefunction",
            Command::Minimize => "minimize",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Default, Args)]
struct Flags {
    /// `key = value` settings applied before the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    m: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    omega0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    hbar: Option<String>,
    #[arg(long = "b-re", global = true, allow_hyphen_values = true)]
    b_re: Option<String>,
    #[arg(long = "b-im", global = true, allow_hyphen_values = true)]
    b_im: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    x0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    p0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t0: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    t1: Option<String>,
    #[arg(long, global = true)]
    nt: Option<String>,
    #[arg(long = "grid-halfwidth", global = true)]
    grid_halfwidth: Option<String>,
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<String>,
    /// fock:N or coherent:RE,IM
    #[arg(long, global = true, allow_hyphen_values = true)]
    state: Option<String>,
    /// csv or json-lines
    #[arg(long, global = true)]
    format: Option<String>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long = "solve-mu", global = true, allow_hyphen_values = true)]
    solve_mu: Option<String>,
    /// NAME=VAL tolerance override for a verify check (repeatable).
    #[arg(long, global = true)]
    tol: Vec<String>,
    /// Evaluate the residual checks on the conjugated branch.
    #[arg(long = "corrupt-branch", global = true)]
    corrupt_branch: bool,
}

impl Flags {
    fn apply(&self, config: &mut RunConfig) -> Result<(), UsageError> {
        let settings = [
            ("m", &self.m),
            ("gamma", &self.gamma),
            ("omega0", &self.omega0),
            ("hbar", &self.hbar),
            ("b-re", &self.b_re),
            ("b-im", &self.b_im),
            ("x0", &self.x0),
            ("p0", &self.p0),
            ("t0", &self.t0),
            ("t1", &self.t1),
            ("nt", &self.nt),
            ("grid-halfwidth", &self.grid_halfwidth),
            ("grid-n", &self.grid_n),
            ("state", &self.state),
            ("format", &self.format),
            ("solve-mu", &self.solve_mu),
        ];
        for (key, value) in settings {
            if let Some(v) = value {
                config
                    .set(key, v)
                    .map_err(|e| UsageError(format!("--{key}: {e}")))?;
            }
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        for t in &self.tol {
            let (name, v) = parse_tol(t)?;
            config.tol.insert(name, v);
        }
        if self.corrupt_branch {
            config.corrupt_branch = true;
        }
        Ok(())
    }
}

/// What a command produced: the text to write and whether its checks passed.
pub struct Output {
    pub text: String,
    pub passed: bool,
}

/// Resolves defaults, the optional config file and the flags, in that order.
fn resolve(flags: &Flags) -> Result<RunConfig, UsageError> {
    let mut config = RunConfig::default();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        config.apply_text(&text)?;
    }
    flags.apply(&mut config)?;
    config.validate()?;
    Ok(config)
}

/// Runs one command and returns the produced output, or a usage error.
pub fn execute(command: &str, config: &RunConfig) -> Result<Output, UsageError> {
    match command {
        "trajectory" => commands::trajectory(config),
        "observables" => commands::observables(config),
        "wavefunction" => commands::wavefunction(config),
        "minimize" => commands::minimize(config),
        "verify" => commands::verify(config),
        other => Err(UsageError(format!("unknown command `{other}`"))),
    }
}

/// Entry point of the `tcs` binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let outcome = resolve(&cli.flags).and_then(|config| {
        let output = execute(cli.command.name(), &config)?;
        Ok((config, output))
    });
    let (config, output) = match outcome {
        Ok(v) => v,
        Err(e) => {
            eprintln!("tcs: {e}");
            return EXIT_USAGE;
        }
    };
    let written = match &config.out {
        Some(path) => std::fs::write(path, &output.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(output.text.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(e) = written {
        eprintln!("tcs: {e}");
        return EXIT_USAGE;
    }
    if output.passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
