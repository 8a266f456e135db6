//! Bernoulli numbers: exact values (cached), Bernoulli polynomials at
//! rational points, and residue tables modulo a prime.
//!
//! The convention is `B_1 = −1/2` throughout.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_prime, mul_mod, FactorialTable, Rational};
use crate::error::{domain, Result};

/// Exact Bernoulli numbers `B_0..=B_N`, extended on demand.
///
/// Even-index values are produced from tangent numbers with integer-only
/// arithmetic, then converted to lowest-terms rationals.
#[derive(Debug, Clone, Default)]
pub struct BernoulliCache {
    // B_0, B_2, B_4, ...
    even: Vec<Rational>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache { even: Vec::new() }
    }

    /// Highest index currently held (`0` when empty).
    pub fn max_index(&self) -> usize {
        self.even.len().saturating_sub(1) * 2
    }

    pub fn get(&mut self, n: usize) -> Rational {
        match n {
            1 => Rational::new(-1, 2),
            n if n % 2 == 1 => Rational::zero(),
            n => {
                self.extend_to(n);
                self.even[n / 2].clone()
            }
        }
    }

    /// Ensures every `B_k` with `k ≤ n` is present.
    pub fn extend_to(&mut self, n: usize) {
        if !self.even.is_empty() && self.max_index() >= n {
            return;
        }
        let target = n.max(2 * self.max_index()).max(16);
        self.even = even_bernoulli_from_tangent(target / 2);
    }

    /// `B_0..=B_n` at every index, odd ones included.
    pub fn values(&mut self, n: usize) -> Vec<Rational> {
        self.extend_to(n);
        (0..=n).map(|k| self.get(k)).collect()
    }
}

/// `B_0, B_2, …, B_{2K}` via `B_{2k} = (−1)^{k−1} 2k T_k / (4^k (4^k − 1))`.
fn even_bernoulli_from_tangent(kmax: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(Rational::one());
    if kmax == 0 {
        return out;
    }
    // tangent numbers T_1..T_K, in place
    let mut t: Vec<BigInt> = vec![BigInt::zero(); kmax + 1];
    t[1] = BigInt::one();
    for k in 2..=kmax {
        t[k] = &t[k - 1] * (k - 1);
    }
    for k in 2..=kmax {
        for j in k..=kmax {
            t[j] = &t[j - 1] * (j - k) + &t[j] * (j - k + 2);
        }
    }
    for (k, tk) in t.iter().enumerate().skip(1) {
        let four_k = BigInt::one() << (2 * k);
        let num = tk * (2 * k);
        let den = &four_k * (&four_k - 1u32);
        let b = Rational::new(num, den);
        out.push(if k % 2 == 1 { b } else { -b });
    }
    out
}

fn global() -> &'static RwLock<BernoulliCache> {
    static CACHE: OnceLock<RwLock<BernoulliCache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(BernoulliCache::new()))
}

/// Exact `B_n`, served from a process-wide cache that only grows.
pub fn bernoulli_exact(n: usize) -> Rational {
    if n == 1 || (n % 2 == 1) {
        return BernoulliCache::new().get(n);
    }
    {
        let cache = global().read().expect("bernoulli cache poisoned");
        if !cache.even.is_empty() && cache.max_index() >= n {
            return cache.even[n / 2].clone();
        }
    }
    let mut cache = global().write().expect("bernoulli cache poisoned");
    cache.get(n)
}

/// `B_0..=B_n` from the shared cache.
pub fn bernoulli_values(n: usize) -> Vec<Rational> {
    bernoulli_exact(n + n % 2);
    let cache = global().read().expect("bernoulli cache poisoned");
    (0..=n)
        .map(|k| match k {
            1 => Rational::new(-1, 2),
            k if k % 2 == 1 => Rational::zero(),
            k => cache.even[k / 2].clone(),
        })
        .collect()
}

/// `B_n(x) = Σ_k C(n,k) B_k x^{n−k}` at a rational point.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let b = bernoulli_values(n);
    // Horner in x over coefficients C(n,k) B_k, k = 0..n
    let mut binom = BigInt::one();
    let mut coeffs = Vec::with_capacity(n + 1);
    for (k, bk) in b.iter().enumerate() {
        coeffs.push(bk * &Rational::from_integer(binom.clone()));
        binom = binom * (n - k) / (k + 1);
    }
    coeffs
        .iter()
        .fold(Rational::zero(), |acc, c| acc * x + c)
}

/// `B_n(a/q)` for `0 ≤ a ≤ q`, `q ≥ 1`.
pub fn bernoulli_poly_at(n: usize, a: i64, q: i64) -> Result<Rational> {
    if q < 1 || a < 0 || a > q {
        return domain(format!("need 0 <= a <= q and q >= 1, got a = {a}, q = {q}"));
    }
    Ok(bernoulli_poly(n, &Rational::new(a, q)))
}

/// `B_0, B_2, …, B_{p−3}` reduced modulo an odd prime `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliModTable {
    p: u64,
    // index n/2
    residues: Vec<u64>,
}

impl BernoulliModTable {
    /// Builds the table by the modular recurrence
    /// `(n+1) B_n = −Σ_{k<n} C(n+1,k) B_k`, written as a convolution over
    /// `B_k/k!` and `1/j!` so each entry costs one pass of plain multiply-adds.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return domain(format!("{p} is not an odd prime"));
        }
        if p > u32::MAX as u64 {
            return domain(format!("prime {p} too large for a residue table"));
        }
        let top = (p - 3) as usize;
        let ft = FactorialTable::new(p, (p - 2) as usize);
        let mut residues = Vec::with_capacity(top / 2 + 1);
        residues.push(1 % p);
        // b[k] = B_k / k! for even k
        let mut b_even: Vec<u64> = vec![1];
        let b1 = (p - 1) / 2; // −1/2 mod p
        for n in (2..=top).step_by(2) {
            let j = n + 1;
            let mut acc: u128 = b_even[0] as u128 * ft.inv_fact(j) as u128;
            acc += b1 as u128 * ft.inv_fact(j - 1) as u128;
            for (i, &bk) in b_even.iter().enumerate().skip(1) {
                acc += bk as u128 * ft.inv_fact(j - 2 * i) as u128;
            }
            let s = (acc % p as u128) as u64;
            let bn = mul_mod((p - s) % p, ft.fact(n), p);
            residues.push(bn);
            b_even.push(mul_mod(bn, ft.inv_fact(n), p));
        }
        Ok(BernoulliModTable { p, residues })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Highest even index stored (`p − 3`, or 0 for `p = 3`).
    pub fn max_index(&self) -> usize {
        (self.residues.len() - 1) * 2
    }

    /// `B_n mod p` for `n ≤ p − 3`; odd indices follow the convention.
    pub fn get(&self, n: usize) -> Option<u64> {
        match n {
            1 => Some((self.p - 1) / 2),
            n if n % 2 == 1 => (n <= self.max_index().max(1)).then_some(0),
            n => self.residues.get(n / 2).copied(),
        }
    }

    /// Residues of `B_0, B_2, …` in index order `n/2`.
    pub fn even_residues(&self) -> &[u64] {
        &self.residues
    }
}

/// Table for an odd prime `p`; thin wrapper kept for symmetry with the exact path.
pub fn bernoulli_mod_table(p: u64) -> Result<BernoulliModTable> {
    BernoulliModTable::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{odd_primes_below, valuation};

    /// Independent oracle: `Σ_{k=0}^{n} C(n+1,k) B_k = 0` with exact rationals.
    fn recurrence(n: usize) -> Vec<Rational> {
        let mut b = vec![Rational::one()];
        for m in 1..=n {
            let mut binom = BigInt::one(); // C(m+1, 0)
            let mut acc = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc = acc + bk * &Rational::from_integer(binom.clone());
                binom = binom * (m + 1 - k) / (k + 1);
            }
            b.push(-acc / Rational::from((m + 1) as i64));
        }
        b
    }

    #[test]
    fn exact_examples() {
        assert_eq!(bernoulli_exact(0), Rational::one());
        assert_eq!(bernoulli_exact(1), Rational::new(-1, 2));
        assert_eq!(bernoulli_exact(2), Rational::new(1, 6));
        assert_eq!(bernoulli_exact(12), Rational::new(-691, 2730));
        assert_eq!(bernoulli_exact(13), Rational::zero());
    }

    #[test]
    fn tangent_route_matches_recurrence() {
        let oracle = recurrence(80);
        let fast = bernoulli_values(80);
        assert_eq!(oracle, fast);
    }

    #[test]
    fn cache_extension_is_consistent() {
        let mut c = BernoulliCache::new();
        let small = c.get(20);
        c.extend_to(200);
        assert!(c.max_index() >= 200);
        assert_eq!(c.get(20), small);
        assert_eq!(c.get(200), bernoulli_exact(200));
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        for n in (2..=60).step_by(2) {
            let den: u64 = odd_primes_below(n as u64 + 2)
                .into_iter()
                .chain([2])
                .filter(|q| n as u64 % (q - 1) == 0)
                .product();
            assert_eq!(bernoulli_exact(n).denom(), &BigInt::from(den), "B_{n}");
        }
    }

    #[test]
    fn irregular_pair_37_32() {
        let b32 = bernoulli_exact(32);
        assert!(valuation(&b32, 37).is_positive());
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(bernoulli_poly_at(2, 0, 1).unwrap(), Rational::new(1, 6));
        assert_eq!(bernoulli_poly_at(2, 1, 5).unwrap(), Rational::new(1, 150));
        assert_eq!(
            bernoulli_poly_at(4, 1, 8).unwrap(),
            Rational::new(-1313, 61440)
        );
        assert!(bernoulli_poly_at(2, 3, 2).is_err());
        assert!(bernoulli_poly_at(2, 0, 0).is_err());
    }

    #[test]
    fn polynomial_reflection() {
        for n in 0..=12usize {
            for (a, q) in [(1, 3), (2, 7), (5, 11), (3, 4), (0, 1)] {
                let x = Rational::new(a, q);
                let y = Rational::one() - &x;
                let lhs = bernoulli_poly(n, &y);
                let rhs = bernoulli_poly(n, &x);
                let rhs = if n % 2 == 0 { rhs } else { -rhs };
                assert_eq!(lhs, rhs, "n = {n}, x = {a}/{q}");
            }
        }
    }

    #[test]
    fn mod_table_examples() {
        let t7 = BernoulliModTable::new(7).unwrap();
        assert_eq!(t7.get(0), Some(1));
        assert_eq!(t7.get(2), Some(6));
        assert_eq!(t7.get(4), Some(3));
        assert_eq!(t7.get(6), None);
        assert_eq!(BernoulliModTable::new(3).unwrap().get(0), Some(1));
        assert!(BernoulliModTable::new(9).is_err());
        assert!(BernoulliModTable::new(2).is_err());
    }

    #[test]
    fn mod_table_matches_exact() {
        for p in [5u64, 7, 11, 13, 101, 257] {
            let t = BernoulliModTable::new(p).unwrap();
            for n in (0..=(p - 3) as usize).step_by(2) {
                assert_eq!(t.get(n), bernoulli_exact(n).residue(p), "p = {p}, n = {n}");
            }
        }
    }
}
