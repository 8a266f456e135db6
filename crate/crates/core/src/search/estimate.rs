use std::f64::consts::PI;

use crate::arith::is_prime;
use crate::characters::FundamentalDiscriminant;
use crate::error::{domain, Result};

/// Heuristic chance that some prime of `[P, cP]` divides one value:
/// `2(c−1)/ln P`.
pub fn hit_probability(p: u64, c: f64) -> Result<f64> {
    if p < 3 || c < 1.0 {
        return domain(format!("need P >= 3 and c >= 1, got P = {p}, c = {c}"));
    }
    Ok(2.0 * (c - 1.0) / (p as f64).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessEstimate {
    pub uncapped: f64,
    /// `min(uncapped, 1)`.
    pub capped: f64,
}

impl SuccessEstimate {
    /// Expected number of `m` rounds before a hit.
    pub fn expected_rounds(&self) -> f64 {
        1.0 / self.capped
    }

    pub fn cost_note(&self) -> String {
        format!(
            "expected m-rounds = {}; each round also checks every window prime against every value",
            crate::stats::format_sig(self.expected_rounds())
        )
    }
}

/// Chance that one `m` yields a hit over `D ∈ [D1, D2]`, using the density
/// `3/π²` of fundamental discriminants.
pub fn per_m_success(p: u64, c: f64, d_min: u64, d_max: u64) -> Result<SuccessEstimate> {
    if d_min > d_max {
        return domain(format!("D1 = {d_min} exceeds D2 = {d_max}"));
    }
    success_for_width(p, c, (d_max - d_min) as f64)
}

/// [`per_m_success`] for a real width `D2 − D1`.
pub fn success_for_width(p: u64, c: f64, width: f64) -> Result<SuccessEstimate> {
    if width.is_nan() || width < 0.0 {
        return domain(format!("width {width} must be non-negative"));
    }
    let uncapped = (3.0 / (PI * PI)) * width * hit_probability(p, c)?;
    Ok(SuccessEstimate { uncapped, capped: uncapped.min(1.0) })
}

/// Size data for `Q(√D, ζ_p)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FieldReport {
    #[serde(rename = "D")]
    pub d: u64,
    pub p: u64,
    pub degree: u64,
    pub log2_disc: f64,
    pub storage_exponent_note: String,
}

/// `log2 |Δ|` with `Δ = D^{p−1} p^{2p−4}` for `p ∤ D` and
/// `Δ = D^{p−1} p^{p−3}` for `p | D`, `p ≠ D`.
pub fn field_report(d: FundamentalDiscriminant, p: u64) -> Result<FieldReport> {
    if p < 3 || !is_prime(p) {
        return domain(format!("{p} is not an odd prime"));
    }
    let dd = d.get();
    if dd == p {
        return domain("p = D is excluded from the field report");
    }
    let pe = if dd % p == 0 { p - 3 } else { 2 * p - 4 };
    let log2_disc = (p - 1) as f64 * (dd as f64).log2() + pe as f64 * (p as f64).log2();
    Ok(FieldReport {
        d: dd,
        p,
        degree: 2 * (p - 1),
        log2_disc,
        storage_exponent_note: format!(
            "integral basis and reduced ideal representatives need (p log D)^O(1) bits; \
             degree {} is absolute (relative degree over Q(sqrt D) is {})",
            2 * (p - 1),
            p - 1
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hit_probability_examples() {
        assert!((hit_probability(100_000, 2.0).unwrap() - 0.17372).abs() < 1e-4);
        assert_eq!(hit_probability(1000, 1.0).unwrap(), 0.0);
        assert!((hit_probability(1_000_000, 1.1).unwrap() - 0.014476).abs() < 1e-5);
        assert!(hit_probability(2, 2.0).is_err());
    }

    #[test]
    fn per_m_success_examples() {
        let e = per_m_success(1_000_000, 2.0, 5, 1000).unwrap();
        assert!((e.uncapped - 43.78).abs() < 0.01, "{}", e.uncapped);
        assert_eq!(e.capped, 1.0);
        assert_eq!(per_m_success(100_000, 2.0, 5, 5).unwrap().uncapped, 0.0);
        assert!(per_m_success(100_000, 2.0, 6, 5).is_err());
    }

    #[test]
    fn field_examples() {
        let fd = |d| FundamentalDiscriminant::new(d).unwrap();
        assert!((field_report(fd(5), 7).unwrap().log2_disc - 42.00).abs() < 0.01);
        assert!((field_report(fd(21), 7).unwrap().log2_disc - 37.58).abs() < 0.01);
        let big = field_report(fd(380), 1_017_299).unwrap();
        let expect = 1_017_298.0 * 380f64.log2() + 2_034_594.0 * 1_017_299f64.log2();
        assert!((big.log2_disc - expect).abs() < 1e-6 * expect);
        assert_eq!(big.degree, 2 * 1_017_298);
        assert!(field_report(fd(5), 5).is_err());
    }
}
