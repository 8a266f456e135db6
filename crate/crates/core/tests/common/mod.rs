//! Independent oracles: nothing here calls into the library's Bernoulli,
//! character, or L-value code.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `B_0 … B_n` by the Akiyama–Tanigawa algorithm (which yields `B_1 = +1/2`),
/// then switched to `B_1 = −1/2`.
pub fn bernoulli_oracle(n: usize) -> Vec<BigRational> {
    let mut a: Vec<BigRational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(q(1, m as i64 + 1));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    if n >= 1 {
        out[1] = q(-1, 2);
    }
    out
}

fn binom(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Kronecker symbol `(D|n)` for `D > 0`, `n ≥ 1`, from the definition:
/// factor `n`, Euler's criterion at odd primes, `D mod 8` at 2.
pub fn kronecker_oracle(d: u64, mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut q = 2u64;
    while n > 1 {
        if q * q > n {
            q = n;
        }
        while n % q == 0 {
            n /= q;
            let s = if q == 2 {
                match d % 8 {
                    1 | 7 => 1,
                    3 | 5 => -1,
                    _ => 0,
                }
            } else if d % q == 0 {
                0
            } else if pow_mod(d, (q - 1) / 2, q) == 1 {
                1
            } else {
                -1
            };
            result *= s;
        }
        q += 1;
    }
    result
}

/// `B_n(x) = Σ C(n,k) B_k x^{n−k}`.
fn bernoulli_poly(n: usize, x: &BigRational, b: &[BigRational]) -> BigRational {
    (0..=n).fold(BigRational::zero(), |acc, k| {
        acc + BigRational::from_integer(binom(n, k)) * &b[k] * Pow::pow(x, (n - k) as u32)
    })
}

/// `B_{n,χ} = D^{n−1} Σ_{a=1}^{D} χ(a) B_n(a/D)`.
pub fn gen_bernoulli_oracle(d: u64, n: usize) -> BigRational {
    let b = bernoulli_oracle(n);
    let dd = BigRational::from_integer(BigInt::from(d));
    let mut s = BigRational::zero();
    for a in 1..=d {
        let chi = kronecker_oracle(d, a);
        if chi != 0 {
            let x = BigRational::new(BigInt::from(a), BigInt::from(d));
            s += BigRational::from_integer(BigInt::from(chi)) * bernoulli_poly(n, &x, &b);
        }
    }
    s * Pow::pow(&dd, (n - 1) as u32)
}

/// `L(1−2m, χ_D) = −B_{2m,χ}/(2m)`.
pub fn l_oracle(d: u64, m: u64) -> BigRational {
    let n = 2 * m as usize;
    -gen_bernoulli_oracle(d, n) / BigRational::from_integer(BigInt::from(n))
}

/// `ζ(1−2m) = −B_{2m}/(2m)`.
pub fn zeta_oracle(m: u64) -> BigRational {
    let n = 2 * m as usize;
    -bernoulli_oracle(n)[n].clone() / BigRational::from_integer(BigInt::from(n))
}

pub fn zeta_d_oracle(d: u64, m: u64) -> BigRational {
    zeta_oracle(m) * l_oracle(d, m)
}
