use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use apnforge::diffspec::{DEFAULT_DDT_CAP, DEFAULT_SPECTRUM_CAP};
use apnforge::field::DEFAULT_MAX_DEGREE;
use apnforge_cli::commands;
use apnforge_cli::config::{load_modulus_table, SpanArg, MODULUS_TABLE_ENV};
use apnforge_cli::{CliError, Exit, Format, Outcome, RunConfig, VerifyArgs};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "apnforge",
    version,
    about = "APN hexanomial construction and exhaustive verification"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// JSON file mapping field degree to hex modulus
    #[arg(long, global = true, env = MODULUS_TABLE_ENV)]
    modulus_table: Option<PathBuf>,

    /// json, csv or text (witness only); defaults depend on the command
    #[arg(long, global = true)]
    format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = DEFAULT_SPECTRUM_CAP)]
    cap_spectrum: u32,

    #[arg(long, global = true, default_value_t = DEFAULT_DDT_CAP)]
    cap_ddt: u32,

    /// Largest field degree any command will construct
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_DEGREE)]
    cap_field: u32,

    /// Seed for randomized spot checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compare brute-force compatibility with the closed form over a grid of (m, n)
    Sweep {
        #[arg(long, default_value = "1..6")]
        m_range: SpanArg,
        #[arg(long, default_value = "1..12")]
        n_range: SpanArg,
    },
    /// Check that every nonzero derivative of the hexanomial is 2^gcd(m,n)-to-one
    Verify {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        /// Hex value of c; searched for when omitted
        #[arg(long)]
        c: Option<String>,
        /// Hex value of d; the least element outside GF(2^m) when omitted
        #[arg(long)]
        d: Option<String>,
        /// Also write the full difference distribution table as CSV
        #[arg(long)]
        ddt: Option<PathBuf>,
        /// Random (a, x) samples comparing the two forms of G_a
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Show the witness elements of X_y for one root of unity y
    Witness {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        y: String,
    },
    /// Compatibility of (2^m, 2) for min-2m <= 2m <= max-2m
    BcEmpirical {
        #[arg(long, default_value_t = 24)]
        max_2m: u32,
        #[arg(long, default_value_t = 6)]
        min_2m: u32,
    },
    /// Print the field realization used for a degree
    Field {
        #[arg(long)]
        w: u32,
    },
}

fn build_config(g: &GlobalOpts) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig {
        format: g.format,
        out: g.out.clone(),
        seed: g.seed,
        field_cap: g.cap_field,
        ..RunConfig::default()
    };
    cfg.caps.spectrum = g.cap_spectrum;
    cfg.caps.ddt = g.cap_ddt;
    if let Some(path) = &g.modulus_table {
        cfg.modulus_overrides = load_modulus_table(path)?;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let mut cfg = build_config(&cli.global)?;
    match cli.command {
        Command::Sweep { m_range, n_range } => {
            cfg.m_range = m_range.0;
            cfg.n_range = n_range.0;
            commands::sweep(&cfg)
        }
        Command::Verify {
            m,
            n,
            c,
            d,
            ddt,
            samples,
        } => commands::verify(
            &cfg,
            &VerifyArgs {
                m,
                n,
                c,
                d,
                ddt_out: ddt,
                samples,
            },
        ),
        Command::Witness { m, n, y } => commands::witness(&cfg, m, n, &y),
        Command::BcEmpirical { max_2m, min_2m } => commands::bc_empirical(&cfg, min_2m, max_2m),
        Command::Field { w } => commands::field_info(&cfg, w),
    }
    .and_then(|outcome| {
        match &cfg.out {
            Some(path) => {
                fs::write(path, &outcome.body).map_err(|e| CliError::io(path.clone(), e))?
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout
                    .write_all(outcome.body.as_bytes())
                    .map_err(|e| CliError::io("<stdout>", e))?;
            }
        }
        Ok(outcome)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(Exit::Usage as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.exit as u8),
        Err(e) => {
            eprintln!("apnforge: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
