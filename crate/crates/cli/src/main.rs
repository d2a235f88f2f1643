use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use fewcoef::lmodel::Rho;
use fewcoef::numerics::parse_rational;
use fewcoef_cli::commands::{cmd_eval, cmd_forms, cmd_lp, cmd_ls, cmd_recover, cmd_satake, cmd_scan};
use fewcoef_cli::config::{parse_beta_list, parse_beta_range, parse_complex, InstanceSpec, RunConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "fewcoef", version, about = "Evaluate L-functions knowing only a few Dirichlet coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Builtin label or functional-equation file.
    #[arg(long)]
    instance: String,
    /// Point, e.g. 1/2+10i.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value_t = 30)]
    digits: u32,
    /// Comma-separated β values for g(s) = exp(-iβs + c(s - i t0)^2).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// β grid lo:hi:step, appended after --beta.
    #[arg(long, allow_hyphen_values = true)]
    beta_range: Option<String>,
    /// Reorder β by distance to this value, ties to the smaller β.
    #[arg(long, allow_hyphen_values = true)]
    order_from: Option<String>,
    /// c of the test function.
    #[arg(long, default_value = "0")]
    gauss_c: String,
    /// t0 of the test function.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    center: String,
    #[arg(long, default_value_t = 2000)]
    cutoff: usize,
    #[arg(long, default_value_t = 1000)]
    symbol_cut: u64,
    /// Treat every b_n with n ≥ this as unknown.
    #[arg(long)]
    blind_from: Option<u64>,
    /// Constant C in |b_n| ≤ C·Ram(n, d).
    #[arg(long, default_value = "1")]
    bound_c: String,
    /// Symbols left out of the least-squares objective (comma-separated).
    #[arg(long, value_delimiter = ',')]
    free: Vec<u64>,
    /// Directory for cached per-n terms.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::new(InstanceSpec::parse(&self.instance)?, parse_complex(&self.s)?);
        cfg.digits = self.digits;
        if let Some(b) = &self.beta {
            cfg.betas.extend(parse_beta_list(b)?);
        }
        if let Some(r) = &self.beta_range {
            cfg.betas.extend(parse_beta_range(r)?);
        }
        if let Some(o) = &self.order_from {
            cfg.order_betas_from(&parse_rational(o)?);
        }
        cfg.gauss_c = parse_rational(&self.gauss_c)?;
        cfg.center = parse_rational(&self.center)?;
        cfg.cutoff = self.cutoff;
        cfg.symbol_cut = self.symbol_cut;
        cfg.blind_from = self.blind_from;
        cfg.bound_c = parse_rational(&self.bound_c)?;
        cfg.free = self.free.clone();
        cfg.cache_dir = self.cache_dir.clone();
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Z(s) once per test function.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        /// Leading per-n terms to print.
        #[arg(long, default_value_t = 5)]
        terms: usize,
        /// Largest weighted deltas to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// CSV of value and error over a β grid.
    Scan {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Least-squares combination of evaluations.
    Ls {
        #[command(flatten)]
        run: RunArgs,
        /// CSV of the error for every prefix of the β list.
        #[arg(long)]
        sweep: bool,
    },
    /// Linear-programming bounds on the value.
    Lp {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = 0.0)]
        tail_slack: f64,
    },
    /// Linear-programming intervals for unknown coefficients.
    Recover {
        #[command(flatten)]
        run: RunArgs,
        /// Symbols to bound (comma-separated).
        #[arg(long, value_delimiter = ',', required = true)]
        symbol: Vec<u64>,
        #[arg(long, default_value_t = 0.0)]
        tail_slack: f64,
    },
    /// Satake parameters and local factors from a Hecke eigenvalue table.
    Satake {
        /// Table of `p λ(p) λ(p²)` rows; defaults to the vendored weight-20 form.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        weight: i64,
        /// spin, stan or adj.
        #[arg(long)]
        rho: Option<String>,
        #[arg(long, default_value_t = 30)]
        digits: u32,
    },
    /// τ(n) and the weight-24 Hecke eigenforms.
    Forms {
        #[arg(long, default_value_t = 30)]
        n: usize,
    },
}

fn parse_rho(name: &str) -> Result<Rho> {
    Ok(match name {
        "spin" => Rho::Spin,
        "stan" => Rho::Stan,
        "adj" => Rho::Adj,
        other => bail!("unknown representation {other:?}; use spin, stan or adj"),
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let text = match cli.command {
        Command::Eval { run, terms, top } => cmd_eval(run.config()?, terms, top)?,
        Command::Scan { run } => cmd_scan(run.config()?)?,
        Command::Ls { run, sweep } => cmd_ls(run.config()?, sweep)?,
        Command::Lp { run, sweep, tail_slack } => cmd_lp(run.config()?, sweep, tail_slack)?,
        Command::Recover { run, symbol, tail_slack } => cmd_recover(run.config()?, &symbol, tail_slack)?,
        Command::Satake { table, weight, rho, digits } => {
            let rho = rho.as_deref().map(parse_rho).transpose()?;
            cmd_satake(table.as_deref(), weight, rho, digits)?
        }
        Command::Forms { n } => cmd_forms(n)?,
    };
    match cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
