//! Indices of χ-irregularity and D-irregularity of an odd prime.
//!
//! For a prime `p` and discriminant `D` let `δ = p − 1`, or `(p − 1)/2` when
//! `D = p`. The interior weights are the even `n` with `2 ≤ n ≤ δ − 2`, and the
//! terminal weight is `δ`.
//!
//! * χ-index: interior weights with `v_p(L(1−n, χ_D)) ≥ 1`, plus one if
//!   `v_p(L(1−δ, χ_D)) ≥ 1`.
//! * D-index: interior weights with `v_p(ζ_D(1−n)) ≥ 1`, plus one if
//!   `v_p(p·ζ_D(1−δ)) ≥ 1`.
//!
//! A slot counts only on a strictly positive valuation; a prime in the
//! denominator never counts.

use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, odd_primes_below, valuation, Rational, Valuation};
use crate::bernoulli::BernoulliModTable;
use crate::characters::{FundamentalDiscriminant, QuadChar};
use crate::error::{domain, Error, Result};
use crate::lvalues::{l_chi_residues, l_chi_sweep, zeta_neg};
use crate::Exec;

/// Which special values an index counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    /// `L(1−n, χ_D)`.
    Chi,
    /// `ζ_D(1−n)`.
    D,
}

impl std::str::FromStr for IndexKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chi" => Ok(IndexKind::Chi),
            "d" => Ok(IndexKind::D),
            _ => domain(format!("unknown index kind {s:?} (expected chi or d)")),
        }
    }
}

/// How slot values are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    /// Residues modulo `p` wherever they are provably exact, rationals elsewhere.
    Fast,
    /// Exact rationals for every slot.
    Exact,
}

/// `δ` for the pair `(D, p)`.
pub fn delta(d: FundamentalDiscriminant, p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return domain(format!("{p} is not an odd prime"));
    }
    Ok(if d.get() == p { (p - 1) / 2 } else { p - 1 })
}

/// The weights examined for one `(D, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotRange {
    pub p: u64,
    pub d: FundamentalDiscriminant,
    pub delta: u64,
}

impl SlotRange {
    pub fn new(d: FundamentalDiscriminant, p: u64) -> Result<Self> {
        Ok(SlotRange { p, d, delta: delta(d, p)? })
    }

    /// Even weights `2 ≤ n ≤ δ − 2`.
    pub fn interior(&self) -> impl Iterator<Item = u64> {
        (2..=self.delta.saturating_sub(2)).step_by(2)
    }

    pub fn terminal(&self) -> u64 {
        self.delta
    }

    /// Largest attainable index, `⌊(δ−2)/2⌋ + 1`.
    pub fn max_index(&self) -> u64 {
        self.delta.saturating_sub(2) / 2 + 1
    }
}

/// What is known about `v_p` of one slot's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotValuation {
    Exact(Valuation),
    /// Residue path saw zero: the valuation is at least this.
    AtLeast(i64),
}

impl SlotValuation {
    pub fn counts(self) -> bool {
        match self {
            SlotValuation::Exact(v) => v.is_positive(),
            SlotValuation::AtLeast(k) => k >= 1,
        }
    }

    fn from_residue(r: u64) -> Self {
        if r == 0 {
            SlotValuation::AtLeast(1)
        } else {
            SlotValuation::Exact(Valuation::Finite(0))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub weight: u64,
    pub terminal: bool,
    pub valuation: SlotValuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexResult {
    pub d: FundamentalDiscriminant,
    pub p: u64,
    pub kind: IndexKind,
    pub r: u64,
    pub slots: Vec<Slot>,
}

impl IndexResult {
    /// Weights whose slot counted toward `r`.
    pub fn hit_weights(&self) -> Vec<u64> {
        self.slots
            .iter()
            .filter(|s| s.valuation.counts())
            .map(|s| s.weight)
            .collect()
    }
}

/// Shared per-prime data for repeated index computations.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    p: u64,
    table: Arc<BernoulliModTable>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        Ok(PrimeContext { p, table: Arc::new(BernoulliModTable::new(p)?) })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
}

fn build(
    chi: &QuadChar,
    ctx: &PrimeContext,
    kind: IndexKind,
    path: Path,
) -> Result<IndexResult> {
    let d = chi.discriminant();
    let p = ctx.p;
    let range = SlotRange::new(d, p)?;
    let use_residues = path == Path::Fast && d.get() % p != 0;
    let slots = if use_residues {
        residue_slots(chi, ctx, kind, &range)?
    } else {
        exact_slots(kind, &range)?
    };
    let r = slots.iter().filter(|s| s.valuation.counts()).count() as u64;
    debug_assert!(r <= range.max_index());
    Ok(IndexResult { d, p, kind, r, slots })
}

fn residue_slots(
    chi: &QuadChar,
    ctx: &PrimeContext,
    kind: IndexKind,
    range: &SlotRange,
) -> Result<Vec<Slot>> {
    // here δ = p − 1 and every residue below is exact
    let l = l_chi_residues(chi, &ctx.table, range.delta as usize)?;
    let mut slots = Vec::with_capacity(l.len());
    for (i, &lr) in l.iter().enumerate() {
        let weight = 2 * (i as u64 + 1);
        let terminal = weight == range.delta;
        let valuation = match kind {
            IndexKind::Chi => SlotValuation::from_residue(lr),
            // p·ζ(2−p) is a p-adic unit, so the terminal test reduces to L
            IndexKind::D if terminal => SlotValuation::from_residue(lr),
            IndexKind::D => {
                let b = ctx.table.get(weight as usize).expect("weight ≤ p − 3");
                // ζ(1−n) = −B_n/n vanishes mod p iff B_n does
                if lr == 0 || b == 0 {
                    SlotValuation::AtLeast(1)
                } else {
                    SlotValuation::Exact(Valuation::Finite(0))
                }
            }
        };
        slots.push(Slot { weight, terminal, valuation });
    }
    Ok(slots)
}

fn exact_slots(kind: IndexKind, range: &SlotRange) -> Result<Vec<Slot>> {
    let p = range.p;
    let weights: Vec<u64> = range.interior().chain([range.terminal()]).collect();
    let values = l_chi_sweep(range.d, weights.iter().map(|w| w / 2))?;
    let mut slots = Vec::with_capacity(values.len());
    for rec in values {
        let terminal = rec.weight == range.delta;
        let value = match kind {
            IndexKind::Chi => rec.value,
            IndexKind::D => {
                let z = zeta_neg(rec.weight / 2)? * rec.value;
                if terminal {
                    z * Rational::from(p as i64)
                } else {
                    z
                }
            }
        };
        slots.push(Slot {
            weight: rec.weight,
            terminal,
            valuation: SlotValuation::Exact(valuation(&value, p)),
        });
    }
    Ok(slots)
}

/// Index of χ-irregularity of `p` for `χ_D`.
pub fn chi_index(d: FundamentalDiscriminant, p: u64) -> Result<IndexResult> {
    index_with(d, p, IndexKind::Chi, Path::Fast)
}

/// Index of D-irregularity of `p`.
pub fn d_index(d: FundamentalDiscriminant, p: u64) -> Result<IndexResult> {
    index_with(d, p, IndexKind::D, Path::Fast)
}

pub fn index_with(
    d: FundamentalDiscriminant,
    p: u64,
    kind: IndexKind,
    path: Path,
) -> Result<IndexResult> {
    let ctx = PrimeContext::new(p)?;
    build(&QuadChar::new(d), &ctx, kind, path)
}

/// `p` is D-regular iff its index of D-irregularity is zero.
pub fn is_d_regular(d: FundamentalDiscriminant, p: u64) -> Result<bool> {
    Ok(d_index(d, p)?.r == 0)
}

/// One `(D, p, r)` row of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(rename = "D")]
    pub d: u64,
    pub p: u64,
    pub r: u64,
}

/// Indices for every `D` in `discs` and every odd prime `p < p_max`, ordered
/// D-major then by `p`.
pub fn scan_table(
    discs: &[FundamentalDiscriminant],
    p_max: u64,
    kind: IndexKind,
    exec: Exec,
) -> Result<Vec<ScanRow>> {
    if p_max < 3 {
        return domain(format!("p_max = {p_max} leaves no odd primes"));
    }
    let primes = odd_primes_below(p_max);
    let contexts: Vec<PrimeContext> = exec
        .map(&primes, |&p| PrimeContext::new(p))
        .into_iter()
        .collect::<Result<_>>()?;
    let chars: Vec<QuadChar> = exec.map(discs, |&d| QuadChar::new(d));
    let cells: Vec<(usize, usize)> = (0..chars.len())
        .flat_map(|i| (0..contexts.len()).map(move |j| (i, j)))
        .collect();
    let mut rows: Vec<ScanRow> = exec
        .map(&cells, |&(i, j)| {
            build(&chars[i], &contexts[j], kind, Path::Fast).map(|res| ScanRow {
                d: res.d.get(),
                p: res.p,
                r: res.r,
            })
        })
        .into_iter()
        .collect::<Result<_>>()?;
    rows.sort();
    Ok(rows)
}

/// Scan over fundamental `D` with `d_min ≤ D < d_end`.
pub fn scan_range(
    d_min: u64,
    d_end: u64,
    p_max: u64,
    kind: IndexKind,
    exec: Exec,
) -> Result<Vec<ScanRow>> {
    if d_end <= d_min.max(2) {
        return domain(format!("empty discriminant range [{d_min}, {d_end})"));
    }
    let discs = crate::characters::fundamental_range(d_min.max(2), d_end - 1)?;
    scan_table(&discs, p_max, kind, exec)
}

/// Writes rows as `D,p,r` CSV with a header line.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "D,p,r")?;
    for row in rows {
        writeln!(w, "{},{},{}", row.d, row.p, row.r)?;
    }
    Ok(())
}

/// Reads `D,p,r` CSV as written by [`write_scan_csv`].
pub fn read_scan_csv<R: BufRead>(r: R) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line.map_err(|e| Error::Domain(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with('D')) {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| Error::Domain(format!("line {}: bad integer {s:?}", lineno + 1)))
        };
        if fields.len() != 3 {
            return domain(format!("line {}: expected D,p,r", lineno + 1));
        }
        rows.push(ScanRow { d: parse(fields[0])?, p: parse(fields[1])?, r: parse(fields[2])? });
    }
    Ok(rows)
}
