//! First-hit search for primes `p ∈ [P, cP]` dividing the numerator of
//! `ζ_D(1−2m)`, plus the heuristic estimators and the field-size report that
//! go with it.
//!
//! Cells `(m, D)` are visited with `m` outer (from `M1` upward) and
//! fundamental `D ∈ [D1, D2]` inner, ascending. Within one `m` the
//! discriminants are evaluated in batches, possibly in parallel; the first hit
//! is the lexicographically least `(m, D, p)`.

mod estimate;
mod log;

pub use estimate::{
    field_report, hit_probability, per_m_success, success_for_width, FieldReport, SuccessEstimate,
};
pub use log::{read_hits, HitLog, ResumeState};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{is_prime, primes_in_range, PrimeRange};
use crate::characters::{fundamental_range, FundamentalDiscriminant};
use crate::error::{domain, Error, Result};
use crate::lvalues::{numerator_of, zeta_d, WeightTable};
use crate::Exec;

/// Primes `q ∈ [lo, hi]` dividing `n`, ascending.
pub fn primes_dividing_in_range(n: &BigUint, lo: u64, hi: u64) -> Result<Vec<u64>> {
    if n.is_zero() {
        return domain("zero has every prime as a divisor; nothing to search");
    }
    if lo > hi || lo < 2 {
        return domain(format!("need 2 <= lo <= hi, got [{lo}, {hi}]"));
    }
    if *n < BigUint::from(lo) {
        return Ok(Vec::new());
    }
    Ok(primes_dividing(n, &primes_in_range(lo, hi)?))
}

/// Trial division of `n` by the primes of a precomputed range.
pub fn primes_dividing(n: &BigUint, range: &PrimeRange) -> Vec<u64> {
    if n.is_zero() || *n < BigUint::from(range.lo) {
        return Vec::new();
    }
    if let Some(small) = n.to_u64() {
        return range.primes.iter().copied().filter(|&q| small % q == 0).collect();
    }
    if let Some(mid) = n.to_u128() {
        return range
            .primes
            .iter()
            .copied()
            .filter(|&q| mid % q as u128 == 0)
            .collect();
    }
    range
        .primes
        .iter()
        .copied()
        .filter(|&q| (n % q).is_zero())
        .collect()
}

/// Parameters of a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Lower end `P` of the prime window.
    #[serde(rename = "P")]
    pub p_min: u64,
    /// Window ratio `c > 1`; the window is `[P, ⌊cP⌋]`.
    pub c: f64,
    #[serde(rename = "M1")]
    pub m_start: u64,
    #[serde(rename = "D1")]
    pub d_min: u64,
    /// Inclusive upper bound on `D`.
    #[serde(rename = "D2")]
    pub d_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
}

impl SearchParams {
    pub fn new(p_min: u64, c: f64, m_start: u64, d_min: u64, d_max: u64) -> Self {
        SearchParams { p_min, c, m_start, d_min, d_max, m_max: None }
    }

    pub fn with_m_max(mut self, m_max: u64) -> Self {
        self.m_max = Some(m_max);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.p_min < 100 {
            return bad(format!("P = {} must be at least 100", self.p_min));
        }
        if !self.c.is_finite() || self.c <= 1.0 {
            return bad(format!("c = {} must exceed 1", self.c));
        }
        if self.m_start < 1 {
            return bad("M1 must be at least 1".into());
        }
        if self.d_min < 2 || self.d_min > self.d_max {
            return bad(format!("need 2 <= D1 <= D2, got D1 = {}, D2 = {}", self.d_min, self.d_max));
        }
        if self.p_min <= self.d_max {
            return bad(format!(
                "P = {} must exceed D2 = {} so that no window prime can equal or divide D",
                self.p_min, self.d_max
            ));
        }
        if let Some(mm) = self.m_max {
            if mm < self.m_start {
                return bad(format!("m_max = {mm} is below M1 = {}", self.m_start));
            }
        }
        if self.p_max() < self.p_min {
            return bad("window [P, cP] is empty".into());
        }
        Ok(())
    }

    /// `⌊cP⌋`, tolerant of binary rounding just above an integer.
    pub fn p_max(&self) -> u64 {
        let x = self.c * self.p_min as f64;
        let r = x.round();
        if (x - r).abs() < 1e-6 {
            r as u64
        } else {
            x.floor() as u64
        }
    }

    /// Stable identifier: the first 16 hex digits of the SHA-256 of the
    /// parameters' JSON.
    pub fn run_id(&self) -> String {
        let json = serde_json::to_string(self).expect("params serialize");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

/// A found triple with bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub run: String,
    #[serde(rename = "D")]
    pub d: u64,
    pub m: u64,
    pub p: u64,
    pub numerator_bits: u64,
    pub seq: u64,
}

impl Hit {
    /// Rechecks the hit by exact computation.
    pub fn verify(&self, params: &SearchParams) -> Result<()> {
        let fail = |what: &str| domain(format!("hit {:?} fails: {what}", (self.d, self.m, self.p)));
        if !is_prime(self.p) {
            return fail("p not prime");
        }
        if self.p < params.p_min || self.p > params.p_max() {
            return fail("p outside window");
        }
        if self.m > (self.p - 1) / 2 {
            return fail("m > (p-1)/2");
        }
        if self.d < params.d_min || self.d > params.d_max {
            return fail("D outside [D1, D2]");
        }
        if self.d % self.p == 0 {
            return fail("p divides D");
        }
        let d = FundamentalDiscriminant::new(self.d)?;
        let num = numerator_of(&zeta_d(d, self.m)?.value);
        if !(&num % self.p).is_zero() {
            return fail("p does not divide the numerator");
        }
        if num.bits() != self.numerator_bits {
            return fail("numerator size mismatch");
        }
        Ok(())
    }
}

/// The next cell to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cursor {
    pub m: u64,
    pub d: u64,
}

/// All window primes dividing one cell's numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellHit {
    pub m: u64,
    pub d: u64,
    pub primes: Vec<u64>,
    pub numerator_bits: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    /// Cells with hits, ascending by `D`.
    pub hits: Vec<CellHit>,
    pub cells: usize,
    /// Last cell evaluated.
    pub last: Cursor,
    /// `None` once `m_max` has been passed.
    pub next: Option<Cursor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Hit),
    /// `m_max` reached; carries the last cell evaluated.
    Exhausted { last_m: u64, last_d: u64 },
}

/// Resumable walk over the `(m, D)` cells of one parameter set.
pub struct Searcher {
    params: SearchParams,
    window: PrimeRange,
    discs: Vec<FundamentalDiscriminant>,
    exec: Exec,
    tables: Mutex<HashMap<u64, Arc<WeightTable>>>,
}

impl Searcher {
    pub fn new(params: SearchParams, exec: Exec) -> Result<Self> {
        params.validate()?;
        let window = primes_in_range(params.p_min, params.p_max())?;
        let discs = fundamental_range(params.d_min, params.d_max)?;
        if discs.is_empty() {
            return Err(Error::InvalidParams(format!(
                "no fundamental discriminants in [{}, {}]",
                params.d_min, params.d_max
            )));
        }
        Ok(Searcher { params, window, discs, exec, tables: Mutex::new(HashMap::new()) })
    }

    pub fn params(&self) -> &SearchParams {
        &self.params
    }

    pub fn window(&self) -> &PrimeRange {
        &self.window
    }

    pub fn discriminants(&self) -> &[FundamentalDiscriminant] {
        &self.discs
    }

    pub fn start(&self) -> Cursor {
        Cursor { m: self.params.m_start, d: self.discs[0].get() }
    }

    fn table(&self, m: u64) -> Result<Arc<WeightTable>> {
        let mut tables = self.tables.lock().expect("weight tables poisoned");
        if let Some(t) = tables.get(&m) {
            return Ok(Arc::clone(t));
        }
        let t = Arc::new(WeightTable::new(m)?);
        tables.insert(m, Arc::clone(&t));
        Ok(t)
    }

    /// Evaluates one cell.
    pub fn eval_cell(&self, table: &WeightTable, d: FundamentalDiscriminant) -> Option<CellHit> {
        let m = table.m();
        let num = table.zeta_d(d).numerator();
        let primes: Vec<u64> = primes_dividing(&num, &self.window)
            .into_iter()
            .filter(|&p| m <= (p - 1) / 2)
            .collect();
        (!primes.is_empty()).then(|| CellHit { m, d: d.get(), primes, numerator_bits: num.bits() })
    }

    /// Evaluates up to `max_cells` cells starting at `cursor`, never crossing
    /// into the next `m`.
    pub fn run_batch(&self, cursor: Cursor, max_cells: usize) -> Result<Batch> {
        let start = self.discs.partition_point(|d| d.get() < cursor.d);
        if start == self.discs.len() || cursor.m < self.params.m_start {
            return domain(format!("cursor (m = {}, D = {}) lies outside the search", cursor.m, cursor.d));
        }
        let end = (start + max_cells.max(1)).min(self.discs.len());
        let table = self.table(cursor.m)?;
        let slice = &self.discs[start..end];
        let hits: Vec<CellHit> = self
            .exec
            .map(slice, |&d| self.eval_cell(&table, d))
            .into_iter()
            .flatten()
            .collect();
        let next = if end < self.discs.len() {
            Some(Cursor { m: cursor.m, d: self.discs[end].get() })
        } else {
            let m = cursor.m + 1;
            match self.params.m_max {
                Some(mm) if m > mm => None,
                _ => Some(Cursor { m, d: self.discs[0].get() }),
            }
        };
        let last = Cursor { m: cursor.m, d: self.discs[end - 1].get() };
        Ok(Batch { hits, cells: slice.len(), last, next })
    }

    /// Walks cells from `cursor` until the first hit or exhaustion.
    pub fn first_hit_from(&self, mut cursor: Cursor, batch: usize) -> Result<SearchOutcome> {
        let run = self.params.run_id();
        loop {
            let b = self.run_batch(cursor, batch)?;
            if let Some(h) = b.hits.first() {
                return Ok(SearchOutcome::Found(Hit {
                    run,
                    d: h.d,
                    m: h.m,
                    p: h.primes[0],
                    numerator_bits: h.numerator_bits,
                    seq: 1,
                }));
            }
            match b.next {
                Some(c) => cursor = c,
                None => return Ok(SearchOutcome::Exhausted { last_m: b.last.m, last_d: b.last.d }),
            }
        }
    }
}

/// Default number of discriminants evaluated per batch.
pub const DEFAULT_BATCH: usize = 256;

/// Runs the search to its first hit.
pub fn first_hit(params: &SearchParams) -> Result<SearchOutcome> {
    first_hit_with(params, Exec::default(), DEFAULT_BATCH)
}

pub fn first_hit_with(params: &SearchParams, exec: Exec, batch: usize) -> Result<SearchOutcome> {
    let s = Searcher::new(params.clone(), exec)?;
    s.first_hit_from(s.start(), batch)
}
