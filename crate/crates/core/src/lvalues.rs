//! Special values `ζ(1−2m)`, `L(1−2m, χ_D)` and `ζ_D(1−2m) = ζ(1−2m)·L(1−2m, χ_D)`.
//!
//! The defining identity is `L(1−n, χ) = −B_{n,χ}/n` with
//! `B_{n,χ} = D^{n−1} Σ_{a=1}^{D} χ(a) B_n(a/D)`. Expanding `B_n(x)` gives the
//! form every evaluator here actually uses:
//!
//! ```text
//! B_{n,χ} = Σ_{k=0}^{n} C(n,k) B_k D^{k−1} S_{n−k},   S_j = Σ_{a=1}^{D} χ(a) a^j
//! ```
//!
//! Since `S_0 = 0` for a nontrivial character the `k = n` term vanishes, so
//! modulo a prime `p ∤ D` only `B_k` with `k ≤ n − 1` enter. That keeps the
//! weight `n = p − 1` p-integral and lets the residue path cover it too.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{mod_inverse, mul_mod, residue_of, FactorialTable, Rational};
use crate::bernoulli::{bernoulli_exact, bernoulli_poly, bernoulli_values, BernoulliModTable};
use crate::characters::{FundamentalDiscriminant, QuadChar};
use crate::error::{domain, Error, Result};

/// One value `L(1−n, χ_D)` at even weight `n = 2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LValueRecord {
    pub d: FundamentalDiscriminant,
    pub weight: u64,
    pub value: Rational,
}

impl LValueRecord {
    pub fn numerator(&self) -> BigUint {
        numerator_of(&self.value)
    }

    pub fn denominator(&self) -> BigUint {
        self.value.denom().magnitude().clone()
    }
}

/// `ζ_D(1−2m)` for the real quadratic field of discriminant `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaDValue {
    pub d: FundamentalDiscriminant,
    pub m: u64,
    pub value: Rational,
}

impl ZetaDValue {
    /// Builds the value from its two factors.
    pub fn from_factors(d: FundamentalDiscriminant, m: u64, zeta: &Rational, l: &Rational) -> Self {
        ZetaDValue { d, m, value: zeta * l }
    }

    pub fn numerator(&self) -> BigUint {
        numerator_of(&self.value)
    }
}

/// `|numerator|` of a rational in lowest terms.
pub fn numerator_of(q: &Rational) -> BigUint {
    q.abs_numer()
}

/// `ζ(1−2m) = −B_{2m}/(2m)`.
pub fn zeta_neg(m: u64) -> Result<Rational> {
    if m == 0 {
        return domain("zeta_neg needs m >= 1");
    }
    let n = 2 * m;
    Ok(-bernoulli_exact(n as usize) / Rational::from(n as i64))
}

/// `S_j = Σ_{a=1}^{D} χ(a) a^j` for `0 ≤ j ≤ max_j`, exact.
#[derive(Debug, Clone)]
pub struct PowerSums {
    sums: Vec<BigInt>,
}

impl PowerSums {
    pub fn new(chi: &QuadChar, max_j: usize) -> Self {
        let d = chi.modulus();
        let bits = (d as f64).log2() * (max_j as f64 + 1.0) + 1.0;
        let sums = if bits < 120.0 {
            // |S_j| < D^{j+1}, fits comfortably in i128
            let mut acc = vec![0i128; max_j + 1];
            for a in 1..d {
                let c = chi.eval(a) as i128;
                if c == 0 {
                    continue;
                }
                let mut pw = 1i128;
                for s in acc.iter_mut() {
                    *s += c * pw;
                    pw *= a as i128;
                }
            }
            acc.into_iter().map(BigInt::from).collect()
        } else {
            let mut acc = vec![BigInt::zero(); max_j + 1];
            for a in 1..d {
                let c = chi.eval(a);
                if c == 0 {
                    continue;
                }
                let mut pw = BigInt::one();
                for s in acc.iter_mut() {
                    if c > 0 {
                        *s += &pw;
                    } else {
                        *s -= &pw;
                    }
                    pw *= a;
                }
            }
            acc
        };
        PowerSums { sums }
    }

    pub fn max_j(&self) -> usize {
        self.sums.len() - 1
    }

    pub fn get(&self, j: usize) -> &BigInt {
        &self.sums[j]
    }
}

/// `B_{n,χ}` from power sums and exact Bernoulli numbers.
fn generalized_bernoulli(d: u64, n: usize, sums: &PowerSums, b: &[Rational]) -> Rational {
    let dd = BigInt::from(d);
    let mut binom = BigInt::one();
    let mut dpow = BigInt::one();
    let mut acc = Rational::zero();
    for (k, bk) in b.iter().enumerate().take(n) {
        if !bk.is_zero() {
            let term = binom.clone() * &dpow * sums.get(n - k);
            acc = acc + bk * &Rational::from_integer(term);
        }
        binom = binom * (n - k) / (k + 1);
        dpow *= &dd;
    }
    acc / Rational::from_integer(dd)
}

fn l_from_generalized(bn: Rational, n: usize) -> Rational {
    -bn / Rational::from(n as i64)
}

/// `L(1−2m, χ_D)` exactly.
pub fn l_chi(d: FundamentalDiscriminant, m: u64) -> Result<LValueRecord> {
    if m == 0 {
        return domain("l_chi needs m >= 1");
    }
    let n = 2 * m as usize;
    let chi = QuadChar::new(d);
    let sums = PowerSums::new(&chi, n);
    let b = bernoulli_values(n);
    let value = l_from_generalized(generalized_bernoulli(d.get(), n, &sums, &b), n);
    Ok(LValueRecord { d, weight: n as u64, value })
}

/// Fixed `D`, a run of `m` (the "sweep m" strategy): one set of power sums
/// serves every weight.
pub fn l_chi_sweep(
    d: FundamentalDiscriminant,
    ms: impl IntoIterator<Item = u64>,
) -> Result<Vec<LValueRecord>> {
    let ms: Vec<u64> = ms.into_iter().collect();
    if ms.contains(&0) {
        return domain("l_chi_sweep needs m >= 1");
    }
    let Some(&mmax) = ms.iter().max() else {
        return Ok(Vec::new());
    };
    let chi = QuadChar::new(d);
    let sums = PowerSums::new(&chi, 2 * mmax as usize);
    let b = bernoulli_values(2 * mmax as usize);
    Ok(ms
        .into_iter()
        .map(|m| {
            let n = 2 * m as usize;
            LValueRecord {
                d,
                weight: n as u64,
                value: l_from_generalized(generalized_bernoulli(d.get(), n, &sums, &b), n),
            }
        })
        .collect())
}

/// The definitional evaluator `−D^{n−1} Σ χ(a) B_n(a/D) / n`, summed over
/// Bernoulli polynomial values. Slow; kept as the reference other paths agree with.
pub fn l_chi_by_polynomials(d: FundamentalDiscriminant, m: u64) -> Result<Rational> {
    if m == 0 {
        return domain("m >= 1 required");
    }
    let n = 2 * m as usize;
    let dd = d.get();
    let mut sum = Rational::zero();
    for a in 1..=dd {
        let c = d.chi(a);
        if c == 0 {
            continue;
        }
        let v = bernoulli_poly(n, &Rational::new(a as i64, dd as i64));
        sum = if c > 0 { sum + v } else { sum - v };
    }
    let scale = Rational::from_integer(BigInt::from(dd).pow(n as u32 - 1));
    Ok(-(sum * scale) / Rational::from(n as i64))
}

/// `ζ_D(1−2m) = ζ(1−2m) · L(1−2m, χ_D)`.
pub fn zeta_d(d: FundamentalDiscriminant, m: u64) -> Result<ZetaDValue> {
    let z = zeta_neg(m)?;
    let l = l_chi(d, m)?;
    Ok(ZetaDValue::from_factors(d, m, &z, &l.value))
}

/// Shared intermediate values for one weight `n = 2m`, reused across many
/// discriminants (the "sweep D" strategy).
///
/// Holds `C(n,k)·B_k` scaled to integers over a common denominator, plus
/// residue rows per prime built on first request.
#[derive(Debug)]
pub struct WeightTable {
    m: u64,
    // e_k = C(n,k) B_k * common, integers
    scaled: Vec<BigInt>,
    common: BigInt,
    zeta: Rational,
    rows: Mutex<HashMap<u64, Arc<Vec<u64>>>>,
}

impl WeightTable {
    pub fn new(m: u64) -> Result<Self> {
        let zeta = zeta_neg(m)?;
        let n = 2 * m as usize;
        let b = bernoulli_values(n);
        let mut binom = BigInt::one();
        let mut coeffs = Vec::with_capacity(n + 1);
        for (k, bk) in b.iter().enumerate() {
            coeffs.push(bk * &Rational::from_integer(binom.clone()));
            binom = binom * (n - k) / (k + 1);
        }
        let common = coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scaled = coeffs
            .iter()
            .map(|c| c.numer() * (&common / c.denom()))
            .collect();
        Ok(WeightTable {
            m,
            scaled,
            common,
            zeta,
            rows: Mutex::new(HashMap::new()),
        })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn weight(&self) -> usize {
        2 * self.m as usize
    }

    /// `ζ(1−2m)`, shared by every `ζ_D` at this weight.
    pub fn zeta(&self) -> &Rational {
        &self.zeta
    }

    /// `L(1−2m, χ_D)`.
    pub fn l_chi(&self, d: FundamentalDiscriminant) -> LValueRecord {
        let n = self.weight();
        let chi = QuadChar::new(d);
        let sums = PowerSums::new(&chi, n);
        let dd = BigInt::from(d.get());
        let mut dpow = BigInt::one();
        let mut acc = BigInt::zero();
        for k in 0..n {
            if !self.scaled[k].is_zero() {
                acc += &self.scaled[k] * &dpow * sums.get(n - k);
            }
            dpow *= &dd;
        }
        let bn = Rational::new(acc, &self.common * &dd);
        LValueRecord {
            d,
            weight: n as u64,
            value: l_from_generalized(bn, n),
        }
    }

    pub fn zeta_d(&self, d: FundamentalDiscriminant) -> ZetaDValue {
        let l = self.l_chi(d);
        ZetaDValue::from_factors(d, self.m, &self.zeta, &l.value)
    }

    /// `C(n,k)·B_k mod p` for `k < n`; `None` when `p` divides the common
    /// denominator of some coefficient that matters.
    pub fn residue_row(&self, p: u64) -> Option<Arc<Vec<u64>>> {
        let mut rows = self.rows.lock().expect("weight table poisoned");
        if let Some(r) = rows.get(&p) {
            return Some(Arc::clone(r));
        }
        let inv = mod_inverse(residue_of(&self.common, p), p).ok()?;
        let n = self.weight();
        let row: Vec<u64> = self.scaled[..n]
            .iter()
            .map(|e| mul_mod(residue_of(e, p), inv, p))
            .collect();
        let row = Arc::new(row);
        rows.insert(p, Arc::clone(&row));
        Some(row)
    }

    /// `L(1−2m, χ_D) mod p` from the cached residue row.
    pub fn l_chi_mod(&self, d: FundamentalDiscriminant, p: u64) -> Result<u64> {
        check_mod_preconditions(d, self.m, p)?;
        let n = self.weight();
        let row = self
            .residue_row(p)
            .ok_or(Error::LastSlotWeight { weight: n as u64, p })?;
        let chi = QuadChar::new(d);
        let s = residue_power_sums(&chi, p, n);
        let dm = d.get() % p;
        let mut dpow = 1u64;
        let mut acc = 0u128;
        for (k, &c) in row.iter().enumerate() {
            acc += mul_mod(c, dpow, p) as u128 * s[n - k] as u128;
            dpow = mul_mod(dpow, dm, p);
        }
        let bn = mul_mod((acc % p as u128) as u64, mod_inverse(dm, p)?, p);
        Ok(neg_div(bn, n as u64, p))
    }
}

fn check_mod_preconditions(d: FundamentalDiscriminant, m: u64, p: u64) -> Result<()> {
    if p < 3 || !crate::arith::is_prime(p) {
        return domain(format!("{p} is not an odd prime"));
    }
    if m == 0 {
        return domain("m >= 1 required");
    }
    if d.get() % p == 0 {
        return Err(Error::NonIntegralRisk { d: d.get(), p });
    }
    if 2 * m + 3 > p {
        return Err(Error::LastSlotWeight { weight: 2 * m, p });
    }
    Ok(())
}

/// `−x/n mod p`.
fn neg_div(x: u64, n: u64, p: u64) -> u64 {
    let inv = mod_inverse(n, p).expect("weight is a unit");
    (p - mul_mod(x, inv, p)) % p
}

/// `S_j mod p` for `0 ≤ j ≤ max_j`, grouping `a` by residue when `D > p`.
pub fn residue_power_sums(chi: &QuadChar, p: u64, max_j: usize) -> Vec<u64> {
    let d = chi.modulus();
    let mut weights: Vec<(u64, u64)> = Vec::new();
    if d <= p {
        for a in 1..d {
            match chi.eval(a) {
                1 => weights.push((a % p, 1)),
                -1 => weights.push((a % p, p - 1)),
                _ => {}
            }
        }
    } else {
        let mut c = vec![0i64; p as usize];
        for (a, &x) in chi.values().iter().enumerate().skip(1) {
            c[a % p as usize] += x as i64;
        }
        for (r, &cr) in c.iter().enumerate().skip(1) {
            let w = cr.rem_euclid(p as i64) as u64;
            if w != 0 {
                weights.push((r as u64, w));
            }
        }
    }
    let mut s = vec![0u64; max_j + 1];
    for (a, w) in weights {
        let mut pw = w;
        for sj in s.iter_mut() {
            *sj += pw;
            if *sj >= p {
                *sj -= p;
            }
            pw = mul_mod(pw, a, p);
        }
    }
    s
}

/// `L(1−2m, χ_D) mod p` by the residue path.
///
/// Refuses `p | D` and weights `2m > p − 3`; those cells need the exact path.
pub fn l_chi_mod(d: FundamentalDiscriminant, m: u64, p: u64) -> Result<u64> {
    check_mod_preconditions(d, m, p)?;
    let table = BernoulliModTable::new(p)?;
    let chi = QuadChar::new(d);
    let res = l_chi_residues(&chi, &table, 2 * m as usize)?;
    Ok(res[m as usize - 1])
}

/// Residues of `L(1−n, χ_D)` for even `n = 2, 4, …, max_weight`, where
/// `max_weight ≤ p − 1`.
///
/// The weight `p − 1` is allowed here: with `p ∤ D` the value is p-integral
/// and its residue only involves `B_k` for `k ≤ p − 3` (see the module notes).
pub fn l_chi_residues(chi: &QuadChar, table: &BernoulliModTable, max_weight: usize) -> Result<Vec<u64>> {
    let p = table.prime();
    let d = chi.modulus();
    if d % p == 0 {
        return Err(Error::NonIntegralRisk { d, p });
    }
    if max_weight as u64 > p - 1 {
        return Err(Error::LastSlotWeight { weight: max_weight as u64, p });
    }
    if max_weight < 2 {
        return Ok(Vec::new());
    }
    let ft = FactorialTable::new(p, max_weight);
    let s = residue_power_sums(chi, p, max_weight);
    let dm = d % p;
    // u_k = B_k D^k / k!  for k in {0, 1, 2, 4, ...}; w_j = S_j / j!
    let w: Vec<u64> = s
        .iter()
        .enumerate()
        .map(|(j, &sj)| mul_mod(sj, ft.inv_fact(j), p))
        .collect();
    let u1 = mul_mod(table.get(1).expect("B_1"), dm, p);
    let mut u_even = Vec::with_capacity(max_weight / 2);
    let mut dpow = 1u64;
    let d2 = mul_mod(dm, dm, p);
    for k in (0..max_weight - 1).step_by(2) {
        let bk = table.get(k).expect("index within table");
        u_even.push(mul_mod(mul_mod(bk, dpow, p), ft.inv_fact(k), p));
        dpow = mul_mod(dpow, d2, p);
    }
    let d_inv = mod_inverse(dm, p)?;
    let mut out = Vec::with_capacity(max_weight / 2);
    for n in (2..=max_weight).step_by(2) {
        let mut acc = u1 as u128 * w[n - 1] as u128;
        for (i, &uk) in u_even.iter().take(n / 2).enumerate() {
            acc += uk as u128 * w[n - 2 * i] as u128;
        }
        let sum = (acc % p as u128) as u64;
        let bn = mul_mod(mul_mod(sum, ft.fact(n), p), d_inv, p);
        out.push(neg_div(bn, n as u64, p));
    }
    Ok(out)
}
