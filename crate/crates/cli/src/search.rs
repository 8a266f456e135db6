use std::collections::HashSet;
use std::path::PathBuf;

use clap::Args;

use quadirr::search::{Cursor, Hit, HitLog, ResumeState, SearchParams, Searcher, DEFAULT_BATCH};

use crate::configure_threads;
use crate::error::{CliError, CliResult};

#[derive(Args)]
pub struct SearchArgs {
    /// Lower end P of the prime window [P, cP].
    #[arg(long)]
    pmin: u64,
    #[arg(long)]
    c: f64,
    #[arg(long, default_value_t = 2)]
    m_start: u64,
    #[arg(long, default_value_t = 5)]
    disc_min: u64,
    /// Inclusive upper bound on D; must be below P.
    #[arg(long)]
    disc_max: u64,
    /// Last m to try; unbounded if omitted.
    #[arg(long)]
    m_max: Option<u64>,
    /// JSON-lines hit log, appended to.
    #[arg(long)]
    log: PathBuf,
    /// State file read on start (if present) and rewritten after every batch.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Record every hit instead of stopping at the first.
    #[arg(long)]
    all: bool,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
    /// Stop after evaluating this many cells (resumable with --resume).
    #[arg(long)]
    max_cells: Option<u64>,
    /// Discriminants evaluated per batch.
    #[arg(long, default_value_t = DEFAULT_BATCH)]
    batch: usize,
}

fn save(path: Option<&PathBuf>, params: &SearchParams, next: Option<Cursor>, first_d: u64) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    let next = next.unwrap_or(Cursor { m: params.m_max.map_or(u64::MAX, |m| m + 1), d: first_d });
    ResumeState { params: params.clone(), next_m: next.m, next_d: next.d }
        .save(path)
        .map_err(|e| CliError::io(path, e))
}

pub fn run(a: SearchArgs) -> CliResult<()> {
    let params = SearchParams {
        p_min: a.pmin,
        c: a.c,
        m_start: a.m_start,
        d_min: a.disc_min,
        d_max: a.disc_max,
        m_max: a.m_max,
    };
    params.validate()?;
    if a.batch == 0 {
        return Err(CliError::Usage("--batch must be at least 1".into()));
    }
    if a.all && a.m_max.is_none() && a.max_cells.is_none() {
        return Err(CliError::Usage("--all needs --m-max or --max-cells to terminate".into()));
    }
    let exec = configure_threads(a.threads)?;
    let searcher = Searcher::new(params.clone(), exec)?;
    let first_d = searcher.start().d;
    let run = params.run_id();
    let log = HitLog::new(&a.log);

    let logged: Vec<Hit> = log
        .read()
        .map_err(|e| CliError::io(&a.log, e))?
        .into_iter()
        .filter(|h| h.run == run)
        .collect();
    if !a.all {
        if let Some(h) = logged.first() {
            println!("{}", serde_json::to_string(h).expect("hit serializes"));
            return Ok(());
        }
    }
    let mut seen: HashSet<(u64, u64, u64)> = logged.iter().map(|h| (h.d, h.m, h.p)).collect();
    let mut seq = logged.iter().map(|h| h.seq).max().unwrap_or(0);

    let mut cursor = Some(searcher.start());
    if let Some(path) = &a.resume {
        if let Some(state) = ResumeState::load(path).map_err(|e| CliError::io(path, e))? {
            if state.params != params {
                return Err(CliError::Usage(format!(
                    "{} was written for different search parameters",
                    path.display()
                )));
            }
            cursor = match params.m_max {
                Some(mm) if state.next_m > mm => None,
                _ => Some(Cursor { m: state.next_m, d: state.next_d }),
            };
        }
    }

    let mut budget = a.max_cells;
    let mut last = None;
    while let Some(cur) = cursor {
        if budget == Some(0) {
            save(a.resume.as_ref(), &params, cursor, first_d)?;
            eprintln!("paused before m={}, D={}", cur.m, cur.d);
            return Ok(());
        }
        let size = budget.map_or(a.batch, |b| a.batch.min(b as usize));
        let batch = searcher.run_batch(cur, size)?;
        budget = budget.map(|b| b - batch.cells as u64);
        last = Some(batch.last);
        for cell in &batch.hits {
            let primes = if a.all { &cell.primes[..] } else { &cell.primes[..1] };
            for &p in primes {
                if !seen.insert((cell.d, cell.m, p)) {
                    continue;
                }
                seq += 1;
                let hit = Hit {
                    run: run.clone(),
                    d: cell.d,
                    m: cell.m,
                    p,
                    numerator_bits: cell.numerator_bits,
                    seq,
                };
                log.append(&hit).map_err(|e| CliError::io(&a.log, e))?;
                println!("{}", serde_json::to_string(&hit).expect("hit serializes"));
            }
            if !a.all {
                save(a.resume.as_ref(), &params, batch.next, first_d)?;
                return Ok(());
            }
        }
        cursor = batch.next;
        save(a.resume.as_ref(), &params, cursor, first_d)?;
    }
    if seen.is_empty() {
        let at = last.map_or(String::new(), |c| format!("; last cell m={}, D={}", c.m, c.d));
        return Err(CliError::Exhausted(format!("no hit up to m_max{at}")));
    }
    Ok(())
}
