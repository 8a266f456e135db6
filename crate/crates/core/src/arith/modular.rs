use crate::error::{domain, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`, in `[1, p−1]`.
pub fn mod_inverse(a: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return domain(format!("modulus {p} is not prime"));
    }
    let a = a % p;
    if a == 0 {
        return domain(format!("{p} divides the argument; no inverse"));
    }
    // extended Euclid on signed values
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return domain(format!("{a} is not invertible modulo {p}"));
    }
    Ok(t0.rem_euclid(p as i128) as u64)
}

/// Factorials and inverse factorials modulo a prime `p`, for arguments below `p`.
#[derive(Debug, Clone)]
pub struct FactorialTable {
    p: u64,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl FactorialTable {
    /// Tabulates `k!` and `1/k!` for `0 ≤ k ≤ n`. Requires `n < p`.
    pub fn new(p: u64, n: usize) -> Self {
        assert!((n as u64) < p, "factorial table must stay below the modulus");
        let mut fact = Vec::with_capacity(n + 1);
        fact.push(1 % p);
        for k in 1..=n {
            fact.push(mul_mod(fact[k - 1], k as u64, p));
        }
        let mut inv_fact = vec![0; n + 1];
        inv_fact[n] = mod_inverse(fact[n], p).expect("k! is a unit below p");
        for k in (1..=n).rev() {
            inv_fact[k - 1] = mul_mod(inv_fact[k], k as u64, p);
        }
        FactorialTable { p, fact, inv_fact }
    }

    #[inline]
    pub fn fact(&self, k: usize) -> u64 {
        self.fact[k]
    }

    #[inline]
    pub fn inv_fact(&self, k: usize) -> u64 {
        self.inv_fact[k]
    }

    pub fn binomial(&self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        mul_mod(
            mul_mod(self.fact[n], self.inv_fact[k], self.p),
            self.inv_fact[n - k],
            self.p,
        )
    }

    /// `1/k mod p` for `1 ≤ k ≤ n`.
    pub fn inverse(&self, k: usize) -> u64 {
        mul_mod(self.inv_fact[k], self.fact[k - 1], self.p)
    }
}
