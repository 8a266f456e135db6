//! Kronecker symbols and positive fundamental discriminants, i.e. the even
//! quadratic characters `χ_D(n) = (D|n)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Kronecker symbol `(a|n)`, total on the integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let (mut a, mut b) = (a as i128, n as i128);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let two_over = |x: i128| -> i8 {
        match x.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        }
    };
    let v = b.trailing_zeros();
    b >>= v;
    let mut k: i8 = if v % 2 == 0 { 1 } else { two_over(a) };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b odd and positive from here on
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= two_over(b);
        }
        if a.rem_euclid(4) == 3 && b.rem_euclid(4) == 3 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

fn is_squarefree(n: u64) -> bool {
    let mut n = n;
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            n /= q;
            if n % q == 0 {
                return false;
            }
        }
        q += 1;
    }
    true
}

/// Whether `d` is the discriminant of a real quadratic field.
pub fn is_fundamental(d: i64) -> bool {
    if d <= 1 {
        return false;
    }
    let d = d as u64;
    match d % 4 {
        1 => is_squarefree(d),
        0 => {
            let k = d / 4;
            matches!(k % 4, 2 | 3) && is_squarefree(k)
        }
        _ => false,
    }
}

/// A positive fundamental discriminant `D > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FundamentalDiscriminant(u64);

impl FundamentalDiscriminant {
    pub fn new(d: u64) -> Result<Self> {
        if d > i64::MAX as u64 || !is_fundamental(d as i64) {
            return domain(format!("{d} is not a positive fundamental discriminant"));
        }
        Ok(FundamentalDiscriminant(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `χ_D(n)`.
    pub fn chi(self, n: u64) -> i8 {
        kronecker(self.0 as i64, (n % self.0) as i64)
    }
}

impl TryFrom<u64> for FundamentalDiscriminant {
    type Error = crate::Error;
    fn try_from(d: u64) -> Result<Self> {
        FundamentalDiscriminant::new(d)
    }
}

impl From<FundamentalDiscriminant> for u64 {
    fn from(d: FundamentalDiscriminant) -> u64 {
        d.0
    }
}

impl fmt::Display for FundamentalDiscriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fundamental discriminants in `[lo, hi]`, ascending.
///
/// Uses a sieve of square multiples rather than per-element trial division.
pub fn fundamental_range(lo: u64, hi: u64) -> Result<Vec<FundamentalDiscriminant>> {
    if lo < 2 || lo > hi {
        return domain(format!("need 2 <= lo <= hi, got [{lo}, {hi}]"));
    }
    let n = hi as usize;
    let mut squarefree = vec![true; n + 1];
    let mut q = 2usize;
    while q * q <= n {
        let sq = q * q;
        for j in (sq..=n).step_by(sq) {
            squarefree[j] = false;
        }
        q += 1;
    }
    Ok((lo..=hi)
        .filter(|&d| match d % 4 {
            1 => squarefree[d as usize],
            0 => matches!((d / 4) % 4, 2 | 3) && squarefree[(d / 4) as usize],
            _ => false,
        })
        .map(FundamentalDiscriminant)
        .collect())
}

/// The character `χ_D`, tabulated over one period.
#[derive(Debug, Clone)]
pub struct QuadChar {
    d: FundamentalDiscriminant,
    values: Vec<i8>,
}

impl QuadChar {
    pub fn new(d: FundamentalDiscriminant) -> Self {
        let dd = d.get() as i64;
        let values = (0..dd).map(|a| kronecker(dd, a)).collect();
        QuadChar { d, values }
    }

    pub fn discriminant(&self) -> FundamentalDiscriminant {
        self.d
    }

    pub fn modulus(&self) -> u64 {
        self.d.get()
    }

    #[inline]
    pub fn eval(&self, n: u64) -> i8 {
        self.values[(n % self.d.get()) as usize]
    }

    /// `χ(0), χ(1), …, χ(D−1)`.
    pub fn values(&self) -> &[i8] {
        &self.values
    }
}
