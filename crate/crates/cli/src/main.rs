//! `quadirr`: command-line front end for special values, irregularity scans,
//! index statistics, and first-hit searches.

mod error;
mod search;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quadirr::characters::fundamental_range;
use quadirr::irregularity::{read_scan_csv, scan_range, write_scan_csv, IndexKind, ScanRow};
use quadirr::lvalues::{l_chi, l_chi_mod, zeta_d, zeta_neg};
use quadirr::search::{field_report, hit_probability, per_m_success};
use quadirr::stats::{
    chi_squared, format_sig, histogram, reports_to_json, significance, write_histograms_csv,
    Grouping, IndexHistogram,
};
use quadirr::{Exec, FundamentalDiscriminant};

use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "quadirr", version, about = "Quadratic irregularity of primes and large irregular prime search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List or count positive fundamental discriminants in [disc-min, disc-max).
    Disc(DiscArgs),
    /// Exact special values, or their residue modulo a prime.
    Value(ValueArgs),
    /// Indices of irregularity for every fundamental D and odd prime p in range.
    Scan(ScanArgs),
    /// First-hit (or all-hits) search for primes in [P, cP] dividing zeta_D(1-2m).
    Search(search::SearchArgs),
    /// Histograms and chi-squared reports from scan rows or raw counts.
    Stats(StatsArgs),
    /// Heuristic hit probabilities for a search window.
    Estimate(EstimateArgs),
    /// Degree and discriminant size of Q(sqrt D, zeta_p).
    Field(FieldArgs),
}

#[derive(Args)]
struct DiscArgs {
    #[arg(long, default_value_t = 2)]
    disc_min: u64,
    /// Exclusive upper bound.
    #[arg(long)]
    disc_max: u64,
    /// Print `count,density` instead of the list.
    #[arg(long)]
    count: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ValueKind {
    /// zeta(1-2m)
    Zeta,
    /// L(1-2m, chi_D)
    Lchi,
    /// zeta_D(1-2m)
    Zetad,
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long, value_enum)]
    kind: ValueKind,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    m: u64,
    /// Reduce modulo this prime.
    #[arg(long = "mod")]
    modulus: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Chi,
    D,
}

impl From<KindArg> for IndexKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Chi => IndexKind::Chi,
            KindArg::D => IndexKind::D,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    Pooled,
    Prime,
    Disc,
}

impl From<GroupArg> for Grouping {
    fn from(g: GroupArg) -> Self {
        match g {
            GroupArg::Pooled => Grouping::Pooled,
            GroupArg::Prime => Grouping::Prime,
            GroupArg::Disc => Grouping::Disc,
        }
    }
}

#[derive(Args)]
struct SummaryArgs {
    #[arg(long, value_enum, default_value = "pooled")]
    group_by: GroupArg,
    /// Histogram CSV destination (stdout if omitted).
    #[arg(long)]
    hist_out: Option<PathBuf>,
    /// Chi-squared JSON destination (stdout if omitted).
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 5)]
    disc_min: u64,
    /// Exclusive upper bound on D.
    #[arg(long)]
    disc_max: u64,
    /// Exclusive upper bound on p.
    #[arg(long)]
    p_max: u64,
    #[arg(long, value_enum, default_value = "chi")]
    index: KindArg,
    /// Also emit the histogram CSV and chi-squared report.
    #[arg(long)]
    summary: bool,
    #[command(flatten)]
    report: SummaryArgs,
    /// Row CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct StatsArgs {
    /// Scan CSV (`D,p,r`) to summarize.
    #[arg(long = "in", conflicts_with_all = ["counts", "significance"])]
    input: Option<PathBuf>,
    /// Counts for r = 0, 1, 2, ... separated by commas.
    #[arg(long, value_delimiter = ',', conflicts_with = "significance")]
    counts: Option<Vec<u64>>,
    /// Print the upper-tail probability of a chi-squared statistic.
    #[arg(long)]
    significance: Option<f64>,
    #[arg(long, default_value_t = 3)]
    df: u32,
    #[command(flatten)]
    report: SummaryArgs,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    pmin: u64,
    #[arg(long)]
    c: f64,
    #[arg(long, requires = "disc_max")]
    disc_min: Option<u64>,
    #[arg(long, requires = "disc_min")]
    disc_max: Option<u64>,
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    p: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Disc(a) => run_disc(a),
        Command::Value(a) => run_value(a),
        Command::Scan(a) => run_scan(a),
        Command::Search(a) => search::run(a),
        Command::Stats(a) => run_stats(a),
        Command::Estimate(a) => run_estimate(a),
        Command::Field(a) => run_field(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("quadirr: {e}");
            ExitCode::from(e.code())
        }
    }
}

/// Sets up the worker pool and picks the execution strategy.
pub(crate) fn configure_threads(threads: Option<usize>) -> CliResult<Exec> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
            Ok(Exec::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Exec::Sequential),
        None => Ok(Exec::default()),
    }
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::io(p, e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fundamental(d: u64) -> CliResult<FundamentalDiscriminant> {
    Ok(FundamentalDiscriminant::new(d)?)
}

fn run_disc(a: DiscArgs) -> CliResult<()> {
    if a.disc_max <= a.disc_min.max(2) {
        return Err(CliError::Usage(format!("empty range [{}, {})", a.disc_min, a.disc_max)));
    }
    let discs = fundamental_range(a.disc_min.max(2), a.disc_max - 1)?;
    let mut out = open_out(None)?;
    if a.count {
        let width = (a.disc_max - a.disc_min) as f64;
        writeln!(out, "{},{}", discs.len(), format_sig(discs.len() as f64 / width))?;
    } else {
        for d in discs {
            writeln!(out, "{}", d.get())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn run_value(a: ValueArgs) -> CliResult<()> {
    let need_d = || {
        a.d.ok_or_else(|| CliError::Usage("--d is required for this kind".into()))
            .and_then(fundamental)
    };
    let text = match (a.kind, a.modulus) {
        (ValueKind::Lchi, Some(p)) => l_chi_mod(need_d()?, a.m, p)?.to_string(),
        (kind, modulus) => {
            let value = match kind {
                ValueKind::Zeta => zeta_neg(a.m)?,
                ValueKind::Lchi => l_chi(need_d()?, a.m)?.value,
                ValueKind::Zetad => zeta_d(need_d()?, a.m)?.value,
            };
            match modulus {
                None => value.to_string(),
                Some(p) => {
                    if p < 2 || !quadirr::arith::is_prime(p) {
                        return Err(CliError::Usage(format!("{p} is not prime")));
                    }
                    value
                        .residue(p)
                        .ok_or_else(|| CliError::Usage(format!("{p} divides the denominator of {value}")))?
                        .to_string()
                }
            }
        }
    };
    println!("{text}");
    Ok(())
}

fn emit_summary(rows: &[ScanRow], args: &SummaryArgs) -> CliResult<()> {
    emit_hist_summary(&histogram(rows, args.group_by.into())?, args)
}

fn emit_hist_summary(hists: &[IndexHistogram], args: &SummaryArgs) -> CliResult<()> {
    let mut out = open_out(args.hist_out.as_deref())?;
    write_histograms_csv(hists, &mut out).map_err(|e| CliError::io_opt(args.hist_out.as_deref(), e))?;
    out.flush()?;
    drop(out);
    let reports = hists.iter().map(chi_squared).collect::<Result<Vec<_>, _>>()?;
    let json = match reports.as_slice() {
        [r] if matches!(args.group_by, GroupArg::Pooled) => r.to_json(),
        _ => reports_to_json(&reports),
    };
    let mut out = open_out(args.report_out.as_deref())?;
    writeln!(out, "{json}").map_err(|e| CliError::io_opt(args.report_out.as_deref(), e))?;
    out.flush()?;
    Ok(())
}

fn run_scan(a: ScanArgs) -> CliResult<()> {
    let exec = configure_threads(a.threads)?;
    let rows = scan_range(a.disc_min, a.disc_max, a.p_max, a.index.into(), exec)?;
    let mut out = open_out(a.out.as_deref())?;
    write_scan_csv(&rows, &mut out).map_err(|e| CliError::io_opt(a.out.as_deref(), e))?;
    out.flush()?;
    drop(out);
    if a.summary {
        emit_summary(&rows, &a.report)?;
    }
    Ok(())
}

fn run_stats(a: StatsArgs) -> CliResult<()> {
    if let Some(x) = a.significance {
        if x < 0.0 || a.df == 0 {
            return Err(CliError::Usage("need statistic >= 0 and df >= 1".into()));
        }
        println!("{}", format_sig(significance(x, a.df)));
        return Ok(());
    }
    if let Some(counts) = &a.counts {
        let hist = IndexHistogram::from_counts(counts);
        if hist.total == 0 {
            return Err(CliError::Usage("counts sum to zero".into()));
        }
        return emit_hist_summary(&[hist], &a.report);
    }
    let path = a
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("one of --in, --counts, --significance is required".into()))?;
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let rows = read_scan_csv(BufReader::new(file))?;
    emit_summary(&rows, &a.report)
}

fn run_estimate(a: EstimateArgs) -> CliResult<()> {
    if a.c.is_nan() || a.c <= 1.0 {
        return Err(CliError::Usage(format!("c = {} must exceed 1", a.c)));
    }
    println!("hit_probability={}", format_sig(hit_probability(a.pmin, a.c)?));
    if let (Some(d1), Some(d2)) = (a.disc_min, a.disc_max) {
        let e = per_m_success(a.pmin, a.c, d1, d2)?;
        println!("per_m_success_uncapped={}", format_sig(e.uncapped));
        println!("per_m_success={}", format_sig(e.capped));
        println!("{}", e.cost_note());
    }
    Ok(())
}

fn run_field(a: FieldArgs) -> CliResult<()> {
    let r = field_report(fundamental(a.d)?, a.p)?;
    let r = quadirr::search::FieldReport { log2_disc: quadirr::stats::round_sig(r.log2_disc), ..r };
    println!("{}", serde_json::to_string(&r).expect("report serializes"));
    Ok(())
}
