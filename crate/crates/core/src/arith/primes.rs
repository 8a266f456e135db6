use super::modular::{mul_mod, pow_mod};
use crate::error::{domain, Result};

const SEGMENT: u64 = 1 << 16;

/// Deterministic primality for every `u64`.
///
/// Strong-pseudoprime tests to the first twelve prime bases are exact below
/// 3.3·10^24, which covers the whole type.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &BASES {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// The primes of a closed interval, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

impl PrimeRange {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

fn small_primes_upto(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes `p` with `lo ≤ p ≤ hi`, by a segmented sieve whose working memory is
/// one segment plus the base primes up to `√hi`.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<PrimeRange> {
    if lo < 2 {
        return domain(format!("range start {lo} below 2"));
    }
    if lo > hi {
        return domain(format!("empty range [{lo}, {hi}]"));
    }
    let base = small_primes_upto(hi.isqrt());
    let mut primes = Vec::new();
    let mut seg = vec![false; SEGMENT as usize];
    let mut start = lo;
    loop {
        let end = start.saturating_add(SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        seg[..len].fill(false);
        for &q in &base {
            if q * q > end {
                break;
            }
            let first = (q * q).max(start.div_ceil(q) * q);
            let mut j = first;
            while j <= end {
                seg[(j - start) as usize] = true;
                j += q;
            }
        }
        primes.extend(
            seg[..len]
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        if end == hi {
            break;
        }
        start = end + 1;
    }
    Ok(PrimeRange { lo, hi, primes })
}

/// Odd primes strictly below `n`.
pub fn odd_primes_below(n: u64) -> Vec<u64> {
    if n <= 3 {
        return Vec::new();
    }
    primes_in_range(3, n - 1).map(|r| r.primes).unwrap_or_default()
}
