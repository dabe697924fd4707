//! Command-line front end. Exit codes: 0 success, 1 data fault, 2 configuration fault.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smaatri::finance::{apply_scenario, npv, CashFlowSeries, ScenarioSpec};
use smaatri::io::{self, ReportFormat};
use smaatri::simos::simos_resolve;
use smaatri::{AssignmentRule, Error, LambdaSpec, Result};

use crate::engine::{self, RunOverrides, RunRequest, Selection};
use crate::http;

#[derive(Debug, Parser)]
#[command(
    name = "smaatri",
    version,
    about = "Risk-class sorting of start-ups with ELECTRE-TRI and SMAA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the acceptability analysis on a project file.
    Run(RunArgs),
    /// Turn a card deck into criterion weights.
    Weights(WeightsArgs),
    /// NPV of cash-flow series under pessimistic scenarios.
    Npv(NpvArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub project: PathBuf,
    /// Decision maker id; repeat for several. Default: every decision maker.
    #[arg(long = "dm", value_name = "ID", conflicts_with_all = ["group", "all_dms"])]
    pub dm: Vec<String>,
    /// Interval weights spanning all decision makers.
    #[arg(long, conflicts_with = "all_dms")]
    pub group: bool,
    #[arg(long)]
    pub all_dms: bool,
    #[arg(long)]
    pub draws: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cutting-level range `lo:hi`, or a single value.
    #[arg(long, value_name = "LO:HI")]
    pub lambda: Option<String>,
    #[arg(long, value_name = "RULE")]
    pub rule: Option<String>,
    /// Sample interval evaluations per draw.
    #[arg(long, value_enum)]
    pub intervals: Option<Toggle>,
    #[arg(long)]
    pub risk_cutoff: Option<usize>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Report file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    pub deck: PathBuf,
    /// Ratio between the most and least important rank; overrides the deck's value.
    #[arg(long)]
    pub z: Option<f64>,
    /// `json` prints the full result; its `weights` object is a valid fixed weight vector.
    #[arg(long, value_enum, default_value = "table")]
    pub format: WeightsFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightsFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct NpvArgs {
    pub cash_flows: PathBuf,
    /// Discount rate; defaults to the file's `rate`.
    #[arg(long, allow_hyphen_values = true)]
    pub rate: Option<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4")]
    pub scenarios: Vec<f64>,
    /// Only this series.
    #[arg(long)]
    pub series: Option<String>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Directory of project files, loaded at start and written through on upload.
    #[arg(long, env = "SMAATRI_PROJECT_DIR")]
    pub dir: Option<PathBuf>,
    #[arg(long, env = http::ADDR_ENV, default_value = http::DEFAULT_ADDR)]
    pub addr: String,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    match dispatch(cli.command, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Run(a) => run(a, out),
        Command::Weights(a) => weights(a, out),
        Command::Npv(a) => npv_table(a, out),
        Command::Serve(a) => serve(a),
    }
}

pub fn parse_lambda(text: &str) -> Result<LambdaSpec> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("cannot read `{s}` as a cutting level")))
    };
    match text.split_once(':') {
        Some((lo, hi)) => LambdaSpec::new(num(lo)?, num(hi)?),
        None => LambdaSpec::fixed(num(text)?),
    }
}

impl RunArgs {
    pub fn request(&self) -> Result<RunRequest> {
        let selection = if self.group {
            Selection::Group
        } else if self.dm.len() == 1 {
            Selection::Dm(self.dm[0].clone())
        } else if !self.dm.is_empty() {
            Selection::Dms(self.dm.clone())
        } else {
            Selection::AllDms
        };
        Ok(RunRequest {
            selection,
            config: RunOverrides {
                draws: self.draws,
                seed: self.seed,
                lambda: self.lambda.as_deref().map(parse_lambda).transpose()?,
                rule: self.rule.as_deref().map(str::parse::<AssignmentRule>).transpose()?,
                evaluation_sampling: self.intervals.map(|t| t == Toggle::On),
                risk_cutoff: self.risk_cutoff,
                workers: self.workers,
            },
        })
    }

    fn report_format(&self) -> ReportFormat {
        match (self.format, &self.out) {
            (Some(f), _) => f.into(),
            (None, Some(p)) if p.extension().is_some_and(|e| e == "json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

fn run(args: RunArgs, out: &mut dyn Write) -> Result<()> {
    let request = args.request()?;
    let project = io::load_project(&args.project)?;
    let reports = engine::execute(&project, &request)?;
    let format = args.report_format();
    match &args.out {
        Some(path) => {
            io::write_report(&reports, format, path)?;
            for r in &reports {
                writeln!(out, "{}\n{}", r.label, io::format_percent_table(r))?;
            }
        }
        None => write!(out, "{}", io::render_report(&reports, format)?)?,
    }
    Ok(())
}

fn weights(args: WeightsArgs, out: &mut dyn Write) -> Result<()> {
    let mut deck = io::load_deck(&args.deck)?;
    if let Some(z) = args.z {
        deck.z = z;
    }
    let result = simos_resolve(&deck)?;
    if args.format == WeightsFormat::Json {
        writeln!(out, "{}", serde_json::to_string_pretty(&result).expect("serializable"))?;
        return Ok(());
    }
    writeln!(
        out,
        "{:>4}  {:<28}{:>6}{:>10}{:>10}",
        "rank", "criteria", "e_r", "k(r)", "total"
    )?;
    for (r, (rank, k)) in deck.ranks.iter().zip(&result.rank_weights).enumerate() {
        let gap = result.gaps.get(r).map_or(String::new(), u32::to_string);
        writeln!(
            out,
            "{:>4}  {:<28}{gap:>6}{k:>10.4}{:>10.4}",
            r + 1,
            rank.join(", "),
            k * rank.len() as f64
        )?;
    }
    writeln!(
        out,
        "e = {}, u = {:.4}, K' = {:.4}\n",
        result.gaps.iter().sum::<u32>(),
        result.unit,
        result.total
    )?;
    writeln!(out, "{:<10}{:>10}", "criterion", "weight")?;
    for id in deck.ranks.iter().flatten() {
        writeln!(out, "{id:<10}{:>10.4}", result.weights.get(id).unwrap_or(f64::NAN))?;
    }
    Ok(())
}

fn npv_table(args: NpvArgs, out: &mut dyn Write) -> Result<()> {
    let file = io::load_cash_flows(&args.cash_flows)?;
    let rate = args
        .rate
        .or(file.rate)
        .ok_or_else(|| Error::Config("no discount rate: pass --rate or set `rate` in the file".into()))?;
    let scenarios = args
        .scenarios
        .iter()
        .map(|&s| ScenarioSpec::new(s))
        .collect::<Result<Vec<_>>>()?;
    npv(&CashFlowSeries::new(vec![0.0])?, rate)?;
    // printed reference values only make sense at the rate they were computed with
    let show_reference = file.rate == Some(rate);
    writeln!(out, "{:<8}{:>9}{:>16}{:>16}", "series", "scenario", "npv", "reference")?;
    let mut matched = false;
    for entry in &file.series {
        if args.series.as_ref().is_some_and(|s| s != &entry.id) {
            continue;
        }
        matched = true;
        let base = ScenarioSpec::new(0.0)?;
        for spec in std::iter::once(base).chain(scenarios.iter().copied()) {
            let value = npv(&apply_scenario(&entry.base, spec), rate)?;
            let reference = entry
                .reference_for(spec.severity())
                .filter(|_| show_reference)
                .map_or_else(|| "-".to_string(), |r| format!("{:.2}", r.npv));
            let label = if spec.severity() == 0.0 {
                "base".to_string()
            } else {
                format!("-{:.0}%", spec.severity() * 100.0)
            };
            writeln!(out, "{:<8}{label:>9}{value:>16.2}{reference:>16}", entry.id)?;
        }
    }
    if !matched {
        return Err(Error::Config(format!(
            "no series `{}`",
            args.series.unwrap_or_default()
        )));
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let state = match &args.dir {
        Some(dir) => http::AppState::with_dir(dir)?,
        None => http::AppState::default(),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(http::serve(state, &args.addr))?;
    Ok(())
}
